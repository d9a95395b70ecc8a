#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "app.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/invsq.hpp"
#include "dwell/morse.hpp"
#include "dwell/numerics.hpp"
#include "dwell/oracle.hpp"
#include "dwell/squarewell.hpp"
#include "dwell/wkbpara.hpp"

namespace dwell::app {

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Check {
  int criterion;
  const char* family;
  const char* name;
  std::function<Outcome(const ValidateOptions&)> run;
};

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

Outcome verdict(bool ok, const std::string& detail) { return {ok, detail}; }

// Largest |E_solver - E_oracle| over all levels of the solver spectrum.
double oracle_gap(const Spectrum& sp, const PotentialSpec& oracle_spec) {
  const int n = static_cast<int>(sp.size());
  const OracleResult r = solve_grid(make_grid_problem(oracle_spec, {}, n, 4000), n);
  if (static_cast<int>(r.energies.size()) < n) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(sp.levels[i].energy - r.energies[i]));
  return worst;
}

Outcome flux_conservation(const ValidateOptions& o) {
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SquareWell s{.d = 3, .c = 0.05 + 1.5 * u(rng), .a = 1.5 * u(rng), .b = 3,
                       .U0 = 0.5 + 20 * u(rng), .W0 = 5 * u(rng)};
    const double e = s.U0 * (1e-3 + (1 - 2e-3) * u(rng));
    const ScatteringSolution t = transmission(s, e);
    worst = std::max(worst, std::abs(t.D + t.R - 1.0));
    if (!(t.D >= 0.0 && t.D <= 1.0)) return verdict(false, "D outside [0, 1] at E = " + fmt(e));
  }
  return verdict(worst <= 1e-12, "max |D + R - 1| = " + fmt(worst) + " over 1000 configurations");
}

Outcome square_oracle(const ValidateOptions& o) {
  const std::vector<SquareWell> sets{
      {.d = 2, .c = 1, .a = 1, .b = 2, .U0 = 5, .W0 = 0},
      {.d = 3, .c = 0.5, .a = 0.5, .b = 3, .U0 = 12, .W0 = 0},
      {.d = 2.5, .c = 1, .a = 1, .b = 2, .U0 = 10, .W0 = 0.3},
      {.d = 3, .c = 0.5, .a = 1, .b = 2.5, .U0 = 8, .W0 = 0}};
  double worst = 0.0;
  int spectra = 0;
  for (const SquareWell& ref : sets) {
    SquareWell solved = ref;
    solved.U0 *= 1.0 + o.perturb_u0;
    std::vector<Spectrum> sps{solve_spectrum_asymmetric(solved)};
    if (solved.is_symmetric()) sps.push_back(solve_spectrum_symmetric(solved));
    for (const Spectrum& sp : sps) {
      worst = std::max(worst, oracle_gap(sp, ref));
      ++spectra;
    }
  }
  return verdict(worst <= 1e-4, "max |E - E_oracle| = " + fmt(worst) + " over " +
                                    std::to_string(spectra) + " spectra, 4 parameter sets");
}

Outcome zero_width_barrier(const ValidateOptions&) {
  double worst = 0.0;
  int count = 0;
  for (double b : {1.0, 1.7}) {
    const SquareWell s{.d = b, .c = 0, .a = 0, .b = b, .U0 = 60, .W0 = 0};
    for (const Level& l : solve_spectrum_symmetric(s).levels) {
      const double k = std::sqrt(2.0 * l.energy);
      const double step = pi / (2.0 * b);
      worst = std::max(worst, std::abs(k - step * std::round(k / step)));
      ++count;
    }
  }
  return verdict(worst <= 1e-6 && count > 0,
                 "max |k - pi n/(2b)| = " + fmt(worst) + " over " + std::to_string(count) + " levels");
}

Outcome high_barrier(const ValidateOptions&) {
  const SquareWell s{.d = 1.5, .c = 0.5, .a = 0.5, .b = 1.5, .U0 = 1e4, .W0 = 0};
  const Spectrum sp = solve_spectrum_symmetric(s);
  double worst = 0.0, lowest = 0.0, split = 0.0;
  for (std::size_t i = 0; i + 1 < sp.size(); i += 2) {
    const int n = static_cast<int>(i / 2) + 1;
    const double box = 0.5 * (pi * n) * (pi * n);
    for (std::size_t j : {i, i + 1}) worst = std::max(worst, std::abs(sp.levels[j].energy / box - 1.0));
    if (i == 0) lowest = worst;
    split = std::max(split, (sp.levels[i + 1].energy - sp.levels[i].energy) / box);
  }
  return verdict(worst <= 0.01 && sp.size() >= 2,
                 "relative offset from (pi n)^2/2: lowest doublet " + fmt(lowest, 6) + ", worst " +
                     fmt(worst, 6) + " over " + std::to_string(sp.size() / 2) +
                     " doublets; max relative splitting " + fmt(split));
}

Outcome invsq_harmonic(const ValidateOptions&) {
  const InvSquare s{.w = 1.3, .B = 0.0};
  const PhysConfig phys{.hbar = 0.7, .mass = 1.0};
  const Spectrum sp = spectrum_exact(s, 10, phys);
  double worst = 0.0;
  for (std::size_t n = 0; n < sp.size(); ++n) {
    const double want = phys.hbar * s.w * (static_cast<double>(n) + 0.5);
    worst = std::max(worst, std::abs(sp.levels[n].energy - want) / want);
  }
  return verdict(worst <= 4 * std::numeric_limits<double>::epsilon(),
                 "max relative deviation from hbar w (n + 1/2) = " + fmt(worst));
}

Outcome period_identity_generic(const ValidateOptions& o) {
  std::mt19937 rng(o.seed + 1);
  std::uniform_real_distribution<double> scale(0.05, 20.0);
  std::uniform_int_distribution<int> step(1, 40);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double delta = scale(rng);
    const double hbar = scale(rng) / 10.0;
    std::vector<double> e{scale(rng)};
    for (int i = 0; i < 4; ++i) e.push_back(e.back() + delta * step(rng));
    const CommensurabilityReport rep = commensurate_delta(e, std::nullopt, 10000, hbar);
    if (!rep.delta) return verdict(false, "no divisor found for a commensurate spectrum");
    worst = std::max(worst, std::abs(poincare_period(rep) * *rep.delta / (2 * pi * hbar) - 1.0));
  }
  return verdict(worst <= 1e-12, "max |T delta / (2 pi hbar) - 1| = " + fmt(worst) + " over 200 spectra");
}

Outcome period_square(const ValidateOptions&) {
  const SquareWell s{.d = 2, .c = 1, .a = 1, .b = 2, .U0 = 50, .W0 = 0};
  const LinearizedSpectrum lin = linearized_spectrum(s);
  const CommensurabilityReport rep = commensurate_delta(lin.energies);
  const double td = lin.period * lin.delta / (2 * pi);
  const double t_rep = rep.delta ? poincare_period(rep) : 0.0;
  const double lim = limiting_period(s);
  // The linearized period approaches the limit as the barrier rises.
  double prev = 1e300;
  bool approaches = true;
  for (double U0 : {1e2, 1e4, 1e6, 1e8}) {
    const SquareWell hi{.d = 2, .c = 1, .a = 1, .b = 2, .U0 = U0, .W0 = 0};
    const double gap = std::abs(linearized_spectrum(hi).period / lim - 1.0);
    approaches = approaches && gap < prev;
    prev = gap;
  }
  // The spacings 4 E0 n(n+1) share the larger divisor 8 E0, so the first
  // recurrence comes at T/2 and T is its second multiple.
  const double multiple = t_rep > 0.0 ? lin.period / t_rep : 0.0;
  const bool ok = std::abs(td - 1.0) <= 1e-12 && rep.delta &&
                  std::abs(multiple - std::round(multiple)) <= 1e-9 && std::round(multiple) >= 1.0 &&
                  std::abs(lim - 4.0 / pi) <= 1e-12 && approaches && prev < 1e-3;
  return verdict(ok, "T delta/(2 pi) - 1 = " + fmt(td - 1.0) + ", T / first recurrence = " +
                         fmt(multiple, 12) + ", |T_lim - 4/pi| = " +
                         fmt(std::abs(lim - 4.0 / pi)) + ", linearized/limit - 1 at U0 = 1e8: " + fmt(prev));
}

Outcome period_invsq(const ValidateOptions&) {
  const double w = 1.7;
  double worst = 0.0;
  for (double B : {0.0, 0.5, 1.0, 2.0}) {
    const Spectrum sp = spectrum_exact({.w = w, .B = B}, 8);
    for (Parity p : {Parity::odd, Parity::even}) {
      std::vector<double> ladder;
      for (const Level& l : sp.levels) {
        if (l.parity == p) ladder.push_back(l.energy);
      }
      const CommensurabilityReport rep = commensurate_delta(ladder);
      if (!rep.delta) return verdict(false, "ladder without divisor at B = " + fmt(B));
      worst = std::max(worst, std::abs(poincare_period(rep) / period({.w = w, .B = B}) - 1.0));
      worst = std::max(worst, std::abs(period({.w = w, .B = B}) * w / pi - 1.0));
    }
  }
  return verdict(worst <= 1e-9, "max |T w / pi - 1| over B in {0, 0.5, 1, 2} = " + fmt(worst));
}

Outcome doublet_dynamics(const ValidateOptions&) {
  SimulateOptions so;
  so.packet = "doublet:0";
  const Simulation sim = simulate(SquareWell{.d = 3, .c = 0.5, .a = 0.5, .b = 3, .U0 = 12, .W0 = 0}, so);
  if (!sim.predicted_period || !sim.measured_period) return verdict(false, "no period measured");
  const double rel = std::abs(*sim.measured_period / *sim.predicted_period - 1.0);
  double flux = 0.0;
  for (const auto& r : sim.rows) flux = std::max(flux, std::abs(r.p_left + r.p_right - 1.0));
  return verdict(rel <= 1e-6 && flux <= 1e-8,
                 "measured/predicted - 1 = " + fmt(rel) + ", max |P_L + P_R - 1| = " + fmt(flux));
}

Outcome revival(const ValidateOptions&) {
  double worst = 1.0;
  for (double B : {0.0, 1.0}) {
    const InvSquare s{.w = 1.0, .B = B};
    const Spectrum sp = spectrum_exact(s, 8);
    std::vector<double> plus;
    for (const Level& l : sp.levels) {
      if (l.parity == Parity::odd) plus.push_back(l.energy);
    }
    std::vector<std::complex<double>> g(plus.size(), 1.0);
    const WavePacket p = make_packet(plus, g);
    worst = std::min(worst, std::abs(autocorrelation(p, period(s))));
  }
  const LinearizedSpectrum lin = linearized_spectrum(SquareWell{.d = 2, .c = 1, .a = 1, .b = 2, .U0 = 50, .W0 = 0});
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  std::vector<std::complex<double>> g;
  for (std::size_t i = 0; i < lin.energies.size(); ++i) g.emplace_back(n(rng), n(rng));
  const WavePacket p = make_packet(lin.energies, g);
  worst = std::min(worst, std::abs(autocorrelation(p, lin.period)));
  return verdict(worst >= 1.0 - 1e-10, "min |A(T)| = 1 - " + fmt(1.0 - worst));
}

Outcome wkb_identity(const ValidateOptions&) {
  double worst = 0.0;
  const std::vector<std::pair<PotentialSpec, double>> cases{
      {ParabolicPair{1.0, 2.0}, 0.5}, {ParabolicPair{1.4, 2.5}, 0.7}, {SquareWell{}, 2.0}, {MorsePair{}, -14.0}};
  for (double pf : {1.0, 0.6}) {
    for (const auto& [spec, e] : cases) {
      const WkbContext c = wkb_action(spec, e, {.hbar = 1.0, .mass = 1.0, .wkb_prefactor = pf});
      const double ratio = wkb_splitting(c) / splitting_from_transmission(c, wkb_transmission(c));
      worst = std::max(worst, std::abs(ratio - 1.0));
    }
  }
  return verdict(worst <= 1e-12, "max |ratio - 1| = " + fmt(worst));
}

Outcome wkb_square(const ValidateOptions&) {
  double lo = 1e300, hi = 0.0;
  int count = 0;
  for (const SquareWell& s : {SquareWell{3, 1, 1, 3, 10, 0}, SquareWell{3, 1.5, 1.5, 3, 6, 0},
                              SquareWell{3, 0.5, 1.0, 3, 20, 1.0}}) {
    for (int i = 1; i < 40; ++i) {
      const double e = s.U0 * i / 40.0;
      const WkbContext c = wkb_action(s, e);
      if (c.action < 3.0) continue;
      const double r = wkb_transmission(c) / transmission(s, e).D;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ++count;
    }
  }
  return verdict(count > 0 && lo >= 0.25 && hi <= 4.0,
                 "D_wkb / D in [" + fmt(lo) + ", " + fmt(hi) + "] over " + std::to_string(count) + " points");
}

Outcome wkb_parabolic(const ValidateOptions&) {
  double lo = 1e300, hi = 0.0;
  for (double a : {2.5, 3.0, 3.5, 4.0}) {
    const ParabolicPair p{1.0, a};
    const OracleResult r = solve_grid(make_grid_problem(p, {}, 2, 4000), 2);
    const double ratio = parabolic_splitting(p, 0).delta_E_n / (0.5 * (r.energies[1] - r.energies[0]));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return verdict(lo >= 0.7 && hi <= 1.4,
                 "delta_E_0 / (oracle gap / 2) in [" + fmt(lo) + ", " + fmt(hi) + "] for a in [2.5, 4]");
}

Outcome morse_oracle(const ValidateOptions&) {
  const MorsePair m{};
  const Spectrum sp = solve_oscillation_spectrum(m);
  const int n = static_cast<int>(sp.size());
  const OracleResult r = solve_grid(make_grid_problem(m, {}, n, 4000), n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(sp.levels[i].energy - r.energies[i]) / std::abs(r.energies[i]));
  }
  return verdict(n > 0 && worst <= 1e-3,
                 "max relative deviation = " + fmt(worst) + " over " + std::to_string(n) + " levels");
}

Outcome morse_transcription(const ValidateOptions&) {
  const TranscriptionCheck tc = check_transcribed_equation(MorsePair{});
  return verdict(tc.agrees && tc.max_deviation <= 1e-8,
                 "max root deviation = " + fmt(tc.max_deviation) + " over " +
                     std::to_string(tc.determinant_roots.size()) + " roots");
}

Outcome kummer_reflection(const ValidateOptions& o) {
  std::mt19937 rng(o.seed + 2);
  std::uniform_real_distribution<double> ua(-5.0, 5.0), ub(-4.5, 8.0), ux(-8.0, 8.0);
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const double a = ua(rng), b = ub(rng), x = ux(rng);
    if (std::abs(b - std::round(b)) < 0.05 && b < 0.5) continue;
    const double m = kummer_m_series(a, b, x).value();
    ScaledValue refl = kummer_m_series(b - a, b, -x);
    refl.log_scale += x;
    worst = std::max(worst, std::abs(m - refl.value()) / std::max(1.0, std::abs(m)));
    ++checked;
  }
  return verdict(worst <= 1e-9, "max scaled |M(a,b,x) - e^x M(b-a,b,-x)| = " + fmt(worst));
}

Outcome special_values(const ValidateOptions&) {
  const double m = std::abs(kummer_m(1.0, 2.0, 1.0) - (std::numbers::e - 1.0));
  const double q = integrate([](double t) { return 2.0 / std::sqrt(pi) * std::exp(-t * t); }, 0.0, 1.0, 1e-15);
  const double e = std::abs(dwell::erf(1.0) - q);
  double parity = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (double x : {0.1, 0.7, 1.3, 2.9, 4.4}) {
      const double h = hermite(n, x);
      const double d = std::abs(hermite(n, -x) - (n % 2 ? -h : h)) / std::max(1.0, std::abs(h));
      parity = std::max(parity, d);
    }
  }
  return verdict(m <= 1e-12 && e <= 1e-12 && parity == 0.0,
                 "|M(1,2,1) - (e - 1)| = " + fmt(m) + ", |erf(1) - quadrature| = " + fmt(e) +
                     ", Hermite parity defect = " + fmt(parity));
}

Outcome parabolic_normalisation(const ValidateOptions&) {
  double worst = 0.0;
  for (double a : {1.5, 2.0, 3.0}) {
    const ParabolicPair p{1.0, a};
    for (int n = 0; n <= 5; ++n) {
      const ParabolicLevel l = parabolic_splitting(p, n);
      const double al = l.alpha;
      const double q = integrate(
          [&](double x) {
            const double h = hermite(n, al * (x - a));
            return std::exp(-al * al * (x - a) * (x - a)) * h * h;
          },
          0.0, a + 14.0 / al, 1e-14);
      worst = std::max(worst, std::abs(l.A_n_sq * q - 1.0));
    }
  }
  return verdict(worst <= 1e-8, "max |A_n^2 / quadrature - 1| = " + fmt(worst));
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all{
      {1, "square", "flux conservation D + R = 1", flux_conservation},
      {2, "square", "square-well spectra vs oracle", square_oracle},
      {3, "square", "zero-width barrier gives one box", zero_width_barrier},
      {3, "square", "U0 = 1e4 doublets at isolated-box levels (1%)", high_barrier},
      {3, "invsq", "B = 0 gives the harmonic spectrum", invsq_harmonic},
      {4, "dynamics", "T delta = 2 pi hbar for commensurate spectra", period_identity_generic},
      {4, "square", "linearized and limiting square-well period", period_square},
      {4, "invsq", "inverse-square period pi / w for every B", period_invsq},
      {5, "square", "doublet occupation period 2 pi hbar / gap", doublet_dynamics},
      {5, "dynamics", "revival |A(T)| >= 1 - 1e-10", revival},
      {6, "parabolic", "WKB splitting / transmission identity", wkb_identity},
      {6, "square", "WKB vs exact square-barrier transmission", wkb_square},
      {6, "parabolic", "Hermite splitting vs oracle doublet", wkb_parabolic},
      {7, "morse", "Morse levels vs oracle", morse_oracle},
      {7, "morse", "transcribed equation vs matching determinant", morse_transcription},
      {8, "numerics", "Kummer reflection identity", kummer_reflection},
      {8, "numerics", "M(1,2,1), erf(1), Hermite parity", special_values},
      {9, "parabolic", "A_n^2 vs quadrature", parabolic_normalisation},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& validation_families() {
  static const std::vector<std::string> f{"square", "morse", "invsq", "parabolic", "numerics", "dynamics"};
  return f;
}

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  for (const auto& name : opts.only) {
    const auto& f = validation_families();
    if (std::find(f.begin(), f.end(), name) == f.end()) {
      throw UsageError("unknown validation family '" + name + "'");
    }
  }
  std::vector<CheckResult> out;
  for (const Check& c : checks()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.family) == opts.only.end()) {
      continue;
    }
    CheckResult r{c.criterion, c.family, c.name, false, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run(opts);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

void write_validation_table(std::ostream& out, const std::vector<CheckResult>& results) {
  out << std::left << std::setw(5) << "crit" << std::setw(11) << "family" << std::setw(50) << "check"
      << std::setw(6) << "result" << "  detail\n";
  int failed = 0;
  for (const auto& r : results) {
    out << std::left << std::setw(5) << r.criterion << std::setw(11) << r.family << std::setw(50) << r.name
        << std::setw(6) << (r.passed ? "PASS" : "FAIL") << "  " << r.detail << " (" << fmt(r.seconds, 2)
        << " s)\n";
    failed += r.passed ? 0 : 1;
  }
  out << results.size() - failed << " of " << results.size() << " checks passed\n";
}

}  // namespace dwell::app
