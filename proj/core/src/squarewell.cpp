#include "dwell/squarewell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dwell/numerics.hpp"

namespace dwell {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// sin(sqrt(q) y)/sqrt(q), continued to sinh for q < 0.
double sn(double q, double y) {
  if (std::abs(q) * y * y < 1e-12) return y * (1.0 - q * y * y / 6.0);
  if (q > 0.0) {
    const double k = std::sqrt(q);
    return std::sin(k * y) / k;
  }
  const double kappa = std::sqrt(-q);
  return std::sinh(kappa * y) / kappa;
}

double cs(double q, double y) {
  if (q >= 0.0) return std::cos(std::sqrt(q) * y);
  return std::cosh(std::sqrt(-q) * y);
}

double sinhc(double y) {
  if (std::abs(y) < 1e-5) return 1.0 + y * y / 6.0;
  return std::sinh(y) / y;
}

double kmax_of(const SquareWell& s, const PhysConfig& phys) {
  return std::sqrt(2.0 * phys.mass * s.U0) / phys.hbar;
}

// z = chi tanh(chi a)/k (even) or chi coth(chi a)/k (odd); the level
// condition on branch m is kL + atan2(1, z) = pi m.
double z_branch(double a, double kmax, double k, Parity p) {
  const double chi = std::sqrt(std::max(0.0, kmax * kmax - k * k));
  if (p == Parity::even) return chi * std::tanh(chi * a) / k;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  const double y = chi * a;
  const double chi_coth = y < 1e-8 ? (1.0 + y * y / 3.0) / a : chi / std::tanh(y);
  return chi_coth / k;
}

double energy_of_k(double k, const PhysConfig& phys) {
  return phys.hbar * phys.hbar * k * k / (2.0 * phys.mass);
}

// Signed squared wavenumbers in left and right wells and chi^2 under the barrier.
struct Squares {
  double q1;
  double q3;
  double chi;
};

Squares squares(const SquareWell& s, double energy, const PhysConfig& phys) {
  const double f = 2.0 * phys.mass / (phys.hbar * phys.hbar);
  return {f * energy, f * (energy + s.W0), std::sqrt(std::max(0.0, f * (s.U0 - energy)))};
}

void check_bound_energy(const SquareWell& s, double energy) {
  if (!(energy > -s.W0 && energy < s.U0)) {
    std::ostringstream msg;
    msg << "energy " << energy << " outside the bound range (" << -s.W0 << ", " << s.U0 << ")";
    throw DomainError(msg.str());
  }
}

void note_degenerate(Spectrum& sp) {
  for (std::size_t i = 0; i + 1 < sp.levels.size(); ++i) {
    if (sp.levels[i].energy == sp.levels[i + 1].energy) {
      std::ostringstream msg;
      msg << "levels " << i << " and " << i + 1
          << " are degenerate to machine precision at E = " << sp.levels[i].energy;
      sp.notes.push_back(msg.str());
    }
  }
}

// Levels of one well closed by the barrier, with phi = 0 at the far barrier
// edge: sn + cs tanh(chi w)/chi = 0.
std::vector<double> well_plus_barrier(const SquareWell& s, double width, double floor,
                                      const SolverConfig& cfg) {
  const PhysConfig& phys = cfg.phys;
  const double w = s.barrier_width();
  const auto f = [&](double e) {
    const double f2 = 2.0 * phys.mass / (phys.hbar * phys.hbar);
    const double q = f2 * (e + floor);
    const double chi = std::sqrt(std::max(0.0, f2 * (s.U0 - e)));
    const double th = chi * w < 1e-8 ? w : std::tanh(chi * w) / chi;
    return sn(q, width) + cs(q, width) * th;
  };
  const double lo = -floor;
  const double span = s.U0 - lo;
  RootConfig rc = cfg.roots;
  return find_roots(f, lo + 1e-12 * span, s.U0 - 1e-12 * span, rc);
}

std::vector<double> box_levels(double width, double floor, double top, const PhysConfig& phys) {
  std::vector<double> out;
  for (int n = 1;; ++n) {
    const double k = pi * n / width;
    const double e = energy_of_k(k, phys) - floor;
    if (e >= top) break;
    out.push_back(e);
  }
  return out;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = nan;
  for (double v : xs) {
    if (std::isnan(best) || std::abs(v - x) < std::abs(best - x)) best = v;
  }
  return best;
}

}  // namespace

SquareWavenumbers wavenumbers(const SquareWell& spec, double energy, const PhysConfig& phys) {
  spec.validate();
  check_bound_energy(spec, energy);
  const Squares sq = squares(spec, energy, phys);
  return {std::sqrt(std::abs(sq.q1)), std::sqrt(sq.q3), sq.chi, sq.q1 < 0.0};
}

SquareResidual square_residual(const SquareWell& spec, double energy, const PhysConfig& phys) {
  const Squares sq = squares(spec, energy, phys);
  const double L = spec.left_width();
  const double R = spec.right_width();
  const double chi = sq.chi;
  const double snl = chi * sn(sq.q1, L), csl = cs(sq.q1, L);
  const double snr = chi * sn(sq.q3, R), csr = cs(sq.q3, R);
  const double damp = std::exp(-2.0 * chi * spec.barrier_width());
  const double value = (snl + csl) * (snr + csr) - damp * (snl - csl) * (snr - csr);
  const double scale = (std::abs(snl) + std::abs(csl)) * (std::abs(snr) + std::abs(csr)) * (1.0 + damp);
  return {value, scale};
}

Spectrum solve_spectrum_asymmetric(const SquareWell& spec, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  const PhysConfig& phys = cfg.phys;
  // Scan in u = sqrt(E + W0) so that the level density is roughly uniform.
  const double u_max = std::sqrt(spec.U0 + spec.W0);
  const auto f = [&](double u) { return square_residual(spec, u * u - spec.W0, phys).value; };
  RootConfig rc = cfg.roots;
  rc.detect_tangent = true;
  const auto roots = find_roots(f, 1e-9 * u_max, u_max * (1.0 - 1e-10), rc);

  Spectrum sp;
  sp.potential = spec;
  for (double u : roots) {
    const double e = u * u - spec.W0;
    if (!(e > -spec.W0 && e < spec.U0)) continue;
    sp.levels.push_back({.energy = e, .index = 0, .parity = Parity::none, .well = Well::both});
  }
  finalize(sp);
  if (sp.empty()) throw NoBoundStatesError("no bound states below the barrier top");
  note_degenerate(sp);
  return sp;
}

Spectrum solve_spectrum_symmetric(const SquareWell& spec, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (!spec.is_symmetric()) throw DomainError("symmetric solver requires d = b, c = a, W0 = 0");
  const PhysConfig& phys = cfg.phys;
  const double L = spec.right_width();
  const double kmax = kmax_of(spec, phys);

  const auto z_of = [&](double k, Parity p) { return z_branch(spec.a, kmax, k, p); };

  Spectrum sp;
  sp.potential = spec;
  const double k_top = kmax * (1.0 - 1e-14);
  for (int m = 1;; ++m) {
    const double lo = pi * (m - 0.5) / L;
    if (lo >= k_top) break;
    const double hi = std::min(pi * m / L, k_top);
    for (Parity p : {Parity::even, Parity::odd}) {
      const auto F = [&, m, p](double k) { return k * L + std::atan2(1.0, z_of(k, p)) - pi * m; };
      const double f_lo = F(lo), f_hi = F(hi);
      if (!(f_hi >= 0.0) || f_lo > 0.0) continue;
      const double k = refine_root(F, {lo, hi, f_lo, f_hi}, cfg.roots);
      const double e = energy_of_k(k, phys);
      if (!(e > 0.0 && e < spec.U0)) continue;
      sp.levels.push_back({.energy = e, .index = 0, .parity = p, .well = Well::both});
    }
  }
  finalize(sp);
  if (sp.empty()) throw NoBoundStatesError("no bound states below the barrier top");
  for (const Level& l : sp.levels) {
    const double r = std::abs(square_residual(spec, l.energy, phys).relative());
    if (r > 1e-8) {
      std::ostringstream msg;
      msg << "level " << l.index << " (E = " << l.energy
          << ") fails the full matching condition, relative residual " << r;
      throw ConvergenceError(msg.str());
    }
  }
  note_degenerate(sp);
  return sp;
}

SymmetricCurves symmetric_curves(const SquareWell& spec, double k, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  if (!spec.is_symmetric()) throw DomainError("symmetric curves require d = b, c = a, W0 = 0");
  const double kmax = kmax_of(spec, phys);
  if (!(k > 0.0 && k <= kmax)) throw DomainError("k must lie in (0, kmax]");
  SymmetricCurves c;
  c.k = k;
  c.f1 = k * spec.right_width();
  const double ae = std::atan2(1.0, z_branch(spec.a, kmax, k, Parity::even));
  const double ao = std::atan2(1.0, z_branch(spec.a, kmax, k, Parity::odd));
  c.phase_even = c.f1 + ae;
  c.phase_odd = c.f1 + ao;
  c.f2_even = pi * std::max(1.0, std::round(c.phase_even / pi)) - ae;
  c.f2_odd = pi * std::max(1.0, std::round(c.phase_odd / pi)) - ao;
  return c;
}

Spectrum solve_spectrum(const SquareWell& spec, const SolverConfig& cfg) {
  return spec.is_symmetric() ? solve_spectrum_symmetric(spec, cfg)
                             : solve_spectrum_asymmetric(spec, cfg);
}

double SquareWavefunction::operator()(double x) const {
  const SquareWell& s = spec;
  if (x < -s.d || x > s.b) return 0.0;
  if (x <= -s.c) {
    const double y = x + s.d;
    return wn.left_evanescent ? a1 * std::sinh(wn.k * y) : a1 * std::sin(wn.k * y);
  }
  if (x <= s.a) return a2 * std::exp(wn.chi * x) + b2 * std::exp(-wn.chi * x);
  return a3 * std::sin(wn.k3 * (x - s.b));
}

double SquareWavefunction::derivative(double x) const {
  const SquareWell& s = spec;
  if (x < -s.d || x > s.b) return 0.0;
  if (x <= -s.c) {
    const double y = x + s.d;
    return wn.left_evanescent ? a1 * wn.k * std::cosh(wn.k * y) : a1 * wn.k * std::cos(wn.k * y);
  }
  if (x <= s.a) return wn.chi * (a2 * std::exp(wn.chi * x) - b2 * std::exp(-wn.chi * x));
  return a3 * wn.k3 * std::cos(wn.k3 * (x - s.b));
}

SquareWavefunction wavefunction(const SquareWell& spec, const Level& level, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  const double e = level.energy;
  check_bound_energy(spec, e);
  SquareWavefunction wf;
  wf.level = level;
  wf.spec = spec;
  wf.wn = wavenumbers(spec, e, cfg.phys);
  const double k = wf.wn.k, k3 = wf.wn.k3, chi = wf.wn.chi;
  if (!(chi > 0.0) || !(k > 0.0)) throw DomainError("wavefunction undefined at the band edges");
  const double L = spec.left_width(), R = spec.right_width(), w = spec.barrier_width();
  const double s = wf.wn.left_evanescent ? std::sinh(k * L) : std::sin(k * L);
  const double dl = wf.wn.left_evanescent ? k * std::cosh(k * L) : k * std::cos(k * L);
  const double s3 = std::sin(k3 * R), c3 = std::cos(k3 * R);
  const double s_plus = s + dl / chi, s_minus = s - dl / chi;

  const bool parity_form = spec.is_symmetric() && level.parity != Parity::none;
  wf.a1 = 1.0;
  if (parity_form) {
    const int p = level.parity == Parity::even ? 1 : -1;
    wf.parity_sign = p;
    wf.b2 = wf.a1 * s_minus / (2.0 * std::exp(chi * spec.a));
    wf.a2 = p * wf.b2;
    wf.a3 = -p * wf.a1;
  } else {
    wf.a2 = 0.5 * wf.a1 * std::exp(chi * spec.c) * s_plus;
    wf.b2 = 0.5 * wf.a1 * std::exp(-chi * spec.c) * s_minus;
    const double val = wf.a2 * std::exp(chi * spec.a) + wf.b2 * std::exp(-chi * spec.a);
    const double der = chi * (wf.a2 * std::exp(chi * spec.a) - wf.b2 * std::exp(-chi * spec.a));
    wf.a3 = -val * s3 + der / k3 * c3;
  }

  // Both junctions must match; the coefficients only enforce one of them.
  const double kscale = std::max({k, k3, chi});
  const auto mismatch = [&](double below, double dbelow, double above, double dabove) {
    const double num = kscale * std::abs(below - above) + std::abs(dbelow - dabove);
    const double den =
        kscale * (std::abs(below) + std::abs(above)) + std::abs(dbelow) + std::abs(dabove) + 1e-300;
    return num / den;
  };
  const auto barrier = [&](double x) { return wf.a2 * std::exp(chi * x) + wf.b2 * std::exp(-chi * x); };
  const auto dbarrier = [&](double x) {
    return chi * (wf.a2 * std::exp(chi * x) - wf.b2 * std::exp(-chi * x));
  };
  const double at_left = mismatch(wf.a1 * s, wf.a1 * dl, barrier(-spec.c), dbarrier(-spec.c));
  const double at_right = mismatch(barrier(spec.a), dbarrier(spec.a), -wf.a3 * s3, wf.a3 * k3 * c3);
  const double worst = std::max(at_left, at_right);
  if (worst > 1e-6) {
    std::ostringstream msg;
    msg << "E = " << e << " is not an eigenvalue: matching mismatch " << worst;
    throw NotAnEigenvalueError(msg.str());
  }

  const double bulk = wf.a1 * wf.a1 * L + wf.a3 * wf.a3 * R +
                      (wf.a2 * wf.a2 * std::exp(2.0 * chi * spec.a) + wf.b2 * wf.b2 * std::exp(2.0 * chi * spec.c)) * w;
  const double norm2 = integrate_pieces([&wf](double x) { const double v = wf(x); return v * v; },
                                        -spec.d, spec.b, {-spec.c, spec.a}, 1e-14 * bulk);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw NormalizationError("wavefunction norm is not positive");
  const double scale = 1.0 / std::sqrt(norm2);
  wf.a1 *= scale;
  wf.a2 *= scale;
  wf.b2 *= scale;
  wf.a3 *= scale;

  // Closed-form normalisation for comparison.
  if (wf.wn.left_evanescent) {
    wf.a1_closed_form = nan;
    wf.a1_discrepancy = nan;
  } else if (parity_form) {
    const double two_chi_a = 2.0 * chi * spec.a;
    const double inv = R + s_minus * s_minus / (4.0 * std::exp(two_chi_a)) *
                               (wf.parity_sign * 2.0 * spec.a + (std::exp(two_chi_a) - std::exp(-two_chi_a)) / chi);
    wf.a1_closed_form = inv > 0.0 ? 1.0 / std::sqrt(inv) : nan;
  } else {
    const double kc = k * std::cos(k * L);
    const double ratio = (s - kc / chi) / (s3 + k3 / chi * c3);
    const double e2 = std::exp(-2.0 * chi * w);
    const double inv = L / 2.0 + w / 2.0 * (s * s - kc * kc / (chi * chi)) +
                       ratio * ratio * e2 * (R / 2.0 + std::sin(2.0 * k3 * (spec.a - spec.b)) / (4.0 * k3)) -
                       std::sin(2.0 * k * L) / (4.0 * k) +
                       (s + kc / chi) * (s + kc / chi) / (8.0 * chi) * (std::exp(2.0 * chi * w) - 1.0) +
                       (s - kc / chi) * (s - kc / chi) / (8.0 * chi) * (1.0 - e2);
    wf.a1_closed_form = inv > 0.0 ? 1.0 / std::sqrt(inv) : nan;
  }
  if (!std::isnan(wf.a1_closed_form)) {
    wf.a1_discrepancy = std::abs(wf.a1_closed_form - std::abs(wf.a1)) / std::abs(wf.a1);
  }
  return wf;
}

ScatteringSolution transmission(const SquareWell& spec, double energy, const PhysConfig& phys) {
  spec.validate();
  if (!(energy > 0.0 && energy < spec.U0)) {
    std::ostringstream msg;
    msg << "transmission requires 0 < E < U0, got E = " << energy;
    throw DomainError(msg.str());
  }
  const Squares sq = squares(spec, energy, phys);
  const double k = std::sqrt(sq.q1), k3 = std::sqrt(sq.q3), chi = sq.chi;
  const double y = chi * spec.barrier_width();
  // Numerator and denominator divided by cosh^2 to stay finite for thick barriers.
  const double t = std::tanh(y);
  const double ey = std::exp(-2.0 * y);
  const double sech2 = 4.0 * ey / ((1.0 + ey) * (1.0 + ey));
  const double a = (k * k3 + chi * chi) * (k * k3 + chi * chi) * t * t;
  const double b = chi * chi * (k - k3) * (k - k3);
  const double c = 4.0 * k * k3 * chi * chi * sech2;
  const double den = a + b + c;
  return {energy, c / den, (a + b) / den};
}

LinearizedSpectrum linearized_spectrum(const SquareWell& spec, const PhysConfig& phys) {
  spec.validate();
  if (!spec.is_symmetric()) throw DomainError("linearized spectrum requires a symmetric well");
  const double L = spec.right_width();
  const double kmax = kmax_of(spec, phys);
  // Chord of the even branch between k = 0 and kmax gives k = m kappa.
  const double kappa = pi / (L + pi / (2.0 * kmax));
  LinearizedSpectrum out;
  out.k0 = 0.5 * kappa;
  out.E0 = energy_of_k(out.k0, phys);
  out.delta = 4.0 * out.E0;
  out.period = pi * phys.hbar / (2.0 * out.E0);
  const double bound = (kmax - out.k0) / (2.0 * out.k0);
  if (bound <= 0.0) return out;
  out.N = static_cast<int>(std::ceil(bound)) - 1;
  for (int n = 0; n <= out.N; ++n) {
    out.k.push_back(out.k0 * (2 * n + 1));
    out.energies.push_back(out.E0 * (2 * n + 1) * (2 * n + 1));
  }
  return out;
}

double limiting_period(const SquareWell& spec, const PhysConfig& phys) {
  const double L = spec.right_width();
  return 4.0 * phys.mass * L * L / (pi * phys.hbar);
}

namespace {

double d_of_k2(const SquareWell& spec, double k2, const PhysConfig& phys) {
  spec.validate();
  if (!spec.is_symmetric()) throw DomainError("D(T) and D(delta) require a symmetric well");
  const double kmax2 = 2.0 * phys.mass * spec.U0 / (phys.hbar * phys.hbar);
  if (!(k2 > 0.0) || k2 >= kmax2) {
    throw DomainError("level would lie outside (0, U0) for this period or spacing");
  }
  const double chi = std::sqrt(kmax2 - k2);
  const double s = 2.0 * spec.a * sinhc(2.0 * spec.a * chi);  // sinh(2 a chi)/chi
  return 1.0 / (1.0 + kmax2 * kmax2 * s * s / (4.0 * k2));
}

}  // namespace

double d_of_period(const SquareWell& spec, int n, double period, const PhysConfig& phys) {
  if (n < 0 || !(period > 0.0)) throw DomainError("d_of_period requires n >= 0 and T > 0");
  const double f = (2.0 * n + 1.0) * (2.0 * n + 1.0);
  return d_of_k2(spec, f * pi * phys.mass / (phys.hbar * period), phys);
}

double d_of_delta(const SquareWell& spec, int n, double delta, const PhysConfig& phys) {
  if (n < 0 || delta < 0.0) throw DomainError("d_of_delta requires n >= 0 and delta >= 0");
  if (delta == 0.0) return 0.0;
  const double f = (2.0 * n + 1.0) * (2.0 * n + 1.0);
  return d_of_k2(spec, delta * phys.mass * f / (2.0 * phys.hbar * phys.hbar), phys);
}

ClassificationReport classify_levels(const SquareWell& spec, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  ClassificationReport rep;
  rep.match_tol = cfg.match_tol_rel * spec.U0;
  rep.box_left = box_levels(spec.left_width(), 0.0, spec.U0, cfg.phys);
  rep.box_right = box_levels(spec.right_width(), spec.W0, spec.U0, cfg.phys);
  rep.left_barrier = well_plus_barrier(spec, spec.left_width(), 0.0, cfg);
  rep.right_barrier = well_plus_barrier(spec, spec.right_width(), spec.W0, cfg);

  Spectrum full;
  try {
    full = solve_spectrum(spec, cfg);
  } catch (const NoBoundStatesError&) {
    return rep;
  }
  std::vector<double> boxes = rep.box_left;
  boxes.insert(boxes.end(), rep.box_right.begin(), rep.box_right.end());
  for (const Level& l : full.levels) {
    LevelClass c;
    c.level = l;
    c.nearest_left = nearest(rep.left_barrier, l.energy);
    c.nearest_right = nearest(rep.right_barrier, l.energy);
    if (!std::isnan(c.nearest_left) && !std::isnan(c.nearest_right) &&
        std::abs(c.nearest_left - c.nearest_right) <= rep.match_tol) {
      c.tunneling_case = 1;
    } else {
      double parent = c.nearest_left;
      if (std::isnan(parent) ||
          (!std::isnan(c.nearest_right) && std::abs(c.nearest_right - l.energy) < std::abs(parent - l.energy))) {
        parent = c.nearest_right;
      }
      const double box = nearest(boxes, parent);
      c.tunneling_case = (!std::isnan(box) && std::abs(box - parent) <= rep.match_tol) ? 3 : 2;
    }
    rep.levels.push_back(c);
  }
  return rep;
}

}  // namespace dwell
