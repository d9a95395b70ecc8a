#include "dwell/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "dwell/numerics.hpp"

namespace dwell {

void WavePacket::validate() const {
  if (components.empty()) throw DomainError("wave packet has no components");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  double mass = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    mass += std::norm(components[i].g);
    if (i > 0 && !(components[i].energy > components[i - 1].energy)) {
      throw DomainError("packet energies must be strictly ascending");
    }
  }
  if (std::abs(mass - 1.0) > 1e-12) throw NormalizationError("sum of |g_n|^2 differs from 1");
}

double WavePacket::energy_range() const {
  return components.back().energy - components.front().energy;
}

WavePacket make_packet(std::vector<PacketComponent> components, double hbar) {
  if (components.empty()) throw DomainError("wave packet has no components");
  std::sort(components.begin(), components.end(),
            [](const PacketComponent& a, const PacketComponent& b) { return a.energy < b.energy; });
  double mass = 0.0;
  for (const auto& c : components) mass += std::norm(c.g);
  if (!(mass > 0.0)) throw NormalizationError("all packet amplitudes vanish");
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& c : components) c.g *= scale;
  WavePacket p;
  p.components = std::move(components);
  p.base_energy = p.components.front().energy;
  p.hbar = hbar;
  p.validate();
  return p;
}

WavePacket make_packet(const std::vector<double>& energies,
                       const std::vector<std::complex<double>>& amplitudes, double hbar) {
  if (energies.size() != amplitudes.size()) {
    throw DomainError("energies and amplitudes differ in length");
  }
  std::vector<PacketComponent> comps;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    PacketComponent c;
    c.g = amplitudes[i];
    c.energy = energies[i];
    c.level.energy = energies[i];
    c.level.index = static_cast<int>(i);
    comps.push_back(std::move(c));
  }
  return make_packet(std::move(comps), hbar);
}

namespace {

struct Fraction {
  long long p;
  long long q;
};

// First continued-fraction convergent p/q of s/unit with |s - unit p/q| <= tol.
std::optional<Fraction> convergent(double s, double unit, double tol, long long q_max) {
  const double r = s / unit;
  long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // h_{-1}, h_{-2}, k_{-1}, k_{-2}
  double x = r;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    if (a > 1e15) break;
    const long long ai = static_cast<long long>(a);
    const long long h = ai * h0 + h1;
    const long long k = ai * k0 + k1;
    if (k > q_max) break;
    if (std::abs(s - unit * static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      return Fraction{h, k};
    }
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    const double frac = x - a;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

CommensurabilityReport commensurate_delta(const std::vector<double>& energies,
                                          std::optional<double> tol, long long l_max,
                                          double hbar) {
  if (energies.size() < 2) throw DomainError("commensurability needs at least two levels");
  if (l_max < 1) throw DomainError("l_max must be positive");
  std::vector<double> e = energies;
  std::sort(e.begin(), e.end());
  const double range = e.back() - e.front();
  const double t = tol.value_or(1e-9 * range);
  if (!(t > 0.0)) throw DomainError("tolerance must be positive");

  CommensurabilityReport rep;
  rep.hbar = hbar;
  std::vector<double> spacing;
  for (double x : e) spacing.push_back(x - e.front());
  double unit = std::numeric_limits<double>::infinity();
  for (double s : spacing) {
    if (s > t) unit = std::min(unit, s);
  }
  if (!std::isfinite(unit)) {
    rep.residual = range;
    return rep;
  }

  long long Q = 1;
  for (double s : spacing) {
    if (s <= t) continue;
    const auto f = convergent(s, unit, t, l_max);
    if (!f) {
      rep.residual = std::abs(s - unit * std::round(s / unit));
      return rep;
    }
    Q = std::lcm(Q, f->q);
    if (Q > l_max) {
      rep.residual = std::abs(s - unit * std::round(s / unit));
      return rep;
    }
  }
  const double delta = unit / static_cast<double>(Q);
  std::vector<long long> l;
  double residual = 0.0;
  for (double s : spacing) {
    const long long n = std::llround(s / delta);
    l.push_back(n);
    residual = std::max(residual, std::abs(s - static_cast<double>(n) * delta));
  }
  rep.residual = residual;
  if (residual > t || delta <= 10.0 * t) return rep;
  rep.delta = delta;
  rep.l_values = std::move(l);
  rep.period = 2.0 * std::numbers::pi * hbar / delta;
  return rep;
}

CommensurabilityReport commensurate_delta(const Spectrum& spectrum, std::optional<double> tol,
                                          long long l_max, double hbar) {
  return commensurate_delta(spectrum.energies(), tol, l_max, hbar);
}

double poincare_period(const CommensurabilityReport& report) {
  if (!report.delta) throw IncommensurateError("spectrum has no common divisor");
  return 2.0 * std::numbers::pi * report.hbar / *report.delta;
}

std::complex<double> autocorrelation(const WavePacket& packet, double t) {
  std::complex<double> sum = 0.0;
  for (const auto& c : packet.components) {
    const double phase = -(c.energy - packet.base_energy) * t / packet.hbar;
    sum += std::norm(c.g) * std::polar(1.0, phase);
  }
  return sum;
}

std::optional<double> quasi_cycle_search(const WavePacket& packet, double fidelity, double t_max) {
  packet.validate();
  if (!(fidelity > 0.0 && fidelity < 1.0)) throw DomainError("fidelity must lie in (0, 1)");
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  const double range = packet.energy_range();
  if (range == 0.0) return std::nullopt;  // |A| = 1 throughout, never a return

  const double dt = std::numbers::pi * packet.hbar / (10.0 * range);
  const auto mod = [&](double t) { return std::abs(autocorrelation(packet, t)); };
  const auto crossing = [&](double lo, double hi) {
    RootBracket b{lo, hi, mod(lo) - fidelity, mod(hi) - fidelity};
    if (b.f_lo >= 0.0) return lo;
    RootConfig rc;
    rc.abs_tol = 1e-14 * std::max(1.0, hi);
    rc.rel_tol = 1e-14;
    return refine_root([&](double t) { return mod(t) - fidelity; }, b, rc);
  };

  // The revival at t = 0 is left first: start after |A| has dropped below
  // the fidelity once.
  double t_prev = 0.0;
  double a_prev = 1.0;
  double a_prev2 = 1.0;
  bool left_origin = false;
  const long long steps = static_cast<long long>(std::ceil(t_max / dt));
  for (long long i = 1; i <= steps; ++i) {
    const double t = std::min(static_cast<double>(i) * dt, t_max);
    const double a = mod(t);
    if (!left_origin) {
      if (a < fidelity) left_origin = true;
    } else if (a >= fidelity) {
      return crossing(t_prev, t);
    } else if (i >= 2 && a_prev >= a_prev2 && a_prev >= a) {
      // Grid maximum below the threshold: the true peak may still reach it.
      const double lo = std::max(t_prev - dt, 0.0);
      const auto [tm, neg] = boost::math::tools::brent_find_minima(
          [&](double s) { return -mod(s); }, lo, t, 52);
      if (-neg >= fidelity && tm <= t_max) return crossing(lo, tm);
    }
    a_prev2 = a_prev;
    a_prev = a;
    t_prev = t;
  }
  return std::nullopt;
}

double well_occupation(const WavePacket& packet, Well side, double t, double x_split,
                       Interval domain, const std::vector<double>& cuts) {
  packet.validate();
  if (side == Well::both) throw DomainError("occupation needs a single side");
  for (const auto& c : packet.components) {
    if (!c.wavefunction) throw DomainError("packet component has no wavefunction");
  }
  std::vector<std::complex<double>> coeff;
  for (const auto& c : packet.components) {
    coeff.push_back(c.g * std::polar(1.0, -(c.energy - packet.base_energy) * t / packet.hbar));
  }
  const RealFn density = [&](double x) {
    std::complex<double> psi = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i) psi += coeff[i] * packet.components[i].wavefunction(x);
    return std::norm(psi);
  };
  const double lo = side == Well::left ? domain.lo : x_split;
  const double hi = side == Well::left ? x_split : domain.hi;
  const double p = integrate_pieces(density, lo, hi, cuts, 1e-11);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace dwell
