#include "dwell/invsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dwell/numerics.hpp"
#include "dwell/oracle.hpp"

namespace dwell {

namespace {

double coupling(const InvSquare& spec, const PhysConfig& phys) {
  const double r = phys.mass * spec.w * spec.B / phys.hbar;
  return 4.0 * r * r;
}

double mu_of(const InvSquare& spec, const PhysConfig& phys) {
  return 0.25 * std::sqrt(1.0 + coupling(spec, phys));
}

// Relative residual of the Schroedinger equation for
// phi = x^p e^{-alpha x^2/2} M(a, c, alpha x^2), using
// M' = (a/c) M(a+1, c+1) and M'' = a(a+1)/(c(c+1)) M(a+2, c+2).
double ode_residual(const InvSquare& spec, const PhysConfig& phys, double energy, double p,
                    double a, double c, double x) {
  const double alpha = phys.mass * spec.w / phys.hbar;
  const double xi = alpha * x * x;
  const double m0 = kummer_m(a, c, xi);
  const double m1 = a / c * kummer_m(a + 1.0, c + 1.0, xi);
  const double m2 = a * (a + 1.0) / (c * (c + 1.0)) * kummer_m(a + 2.0, c + 2.0, xi);
  const double L = p / x - alpha * x;
  const double f2 = L * L - p / (x * x) - alpha;
  const double yx = m1 * 2.0 * alpha * x;
  const double yxx = m2 * 4.0 * alpha * alpha * x * x + m1 * 2.0 * alpha;
  const double phi2 = f2 * m0 + 2.0 * L * yx + yxx;  // phi'' / f
  const double kin = phys.hbar * phys.hbar / (2.0 * phys.mass);
  const double U = evaluate_potential(spec, x, phys);
  const double res = -kin * phi2 + (U - energy) * m0;
  const double scale = std::abs(kin * phi2) + std::abs(U * m0) + std::abs(energy * m0);
  return scale > 0.0 ? std::abs(res) / scale : 0.0;
}

}  // namespace

InvSqParams invsq_params(const InvSquare& spec, double energy, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  InvSqParams p;
  const double h2 = phys.hbar * phys.hbar;
  p.G = 2.0 * phys.mass * energy / h2;
  p.F = -phys.mass * phys.mass * spec.w * spec.w / h2;
  p.K = p.F * spec.B * spec.B;
  p.alpha_scale = std::sqrt(-p.F);
  p.k_whittaker = p.G / (4.0 * p.alpha_scale);
  p.mu = std::sqrt(1.0 / 16.0 - p.K / 4.0);
  p.a_hyp = 0.5 - p.k_whittaker + p.mu;
  p.c_hyp = 1.0 + 2.0 * p.mu;
  return p;
}

double level_energy(const InvSquare& spec, int n, Branch branch, const PhysConfig& phys) {
  if (n < 0) throw DomainError("level index must be non-negative");
  const double mu = mu_of(spec, phys);
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  return 2.0 * phys.hbar * spec.w * (0.5 + n + sign * mu);
}

Spectrum spectrum_exact(const InvSquare& spec, int n_max, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  Spectrum sp;
  sp.potential = spec;
  for (int n = 0; n <= n_max; ++n) {
    sp.levels.push_back({level_energy(spec, n, Branch::minus, phys), 0, Parity::even, Well::both});
    sp.levels.push_back({level_energy(spec, n, Branch::plus, phys), 0, Parity::odd, Well::both});
  }
  finalize(sp);
  for (std::size_t i = 1; i < sp.levels.size(); ++i) {
    if (sp.levels[i].energy == sp.levels[i - 1].energy) {
      sp.notes.push_back("E = " + std::to_string(sp.levels[i].energy) +
                         " occurs on both ladders");
    }
  }
  if (spec.B > 0.0) {
    sp.notes.push_back(
        "B > 0: the core at x = 0 is impenetrable; only the + ladder is a bound state of the "
        "half-line problem, each level twice degenerate across the two sides");
  }
  return sp;
}

double period(const InvSquare& spec) {
  spec.validate();
  return std::numbers::pi / spec.w;
}

double splitting(const InvSquare& spec, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  return phys.hbar * spec.w * std::sqrt(1.0 + coupling(spec, phys));
}

double DShape::in_period(double T) const {
  if (!(T > 0.0)) throw DomainError("period must be positive");
  return constant * (1.0 + t_coefficient / (T * T));
}

double DShape::in_spacing(double delta) const {
  return constant * (1.0 + delta_coefficient * delta * delta);
}

DShape d_dependency(const InvSquare& spec, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  constexpr double pi = std::numbers::pi;
  const double mb = phys.mass * spec.B;
  const double h2 = phys.hbar * phys.hbar;
  DShape s;
  s.constant = pi * pi;
  s.delta_coefficient = mb * mb / (h2 * h2);
  // With Delta = 2 pi hbar / T.
  s.t_coefficient = 4.0 * pi * pi * mb * mb / h2;
  return s;
}

QuantizationCheck verify_quantization(const InvSquare& spec, int n_max, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  QuantizationCheck q;
  const double unit = 2.0 * phys.hbar * spec.w;
  const double alpha = phys.mass * spec.w / phys.hbar;
  for (int n = 0; n <= n_max; ++n) {
    for (Branch br : {Branch::plus, Branch::minus}) {
      const double E = level_energy(spec, n, br, phys);
      const InvSqParams p = invsq_params(spec, E, phys);
      // a = -n selects the first solution, a - 2 mu = -n the second.
      const bool first = br == Branch::plus;
      const double poly = first ? p.a_hyp : p.a_hyp - 2.0 * p.mu;
      q.max_level_deviation = std::max(q.max_level_deviation, std::abs(poly + n) * unit);

      const double c = first ? p.c_hyp : 1.0 - 2.0 * p.mu;
      const double exponent = first ? 0.5 + 2.0 * p.mu : 0.5 - 2.0 * p.mu;
      const double quoted = first ? -1.0 + 2.0 * p.mu : -1.0;
      // M(., 1 - 2 mu, .) does not exist when 2 mu - 1 is a non-negative integer.
      if (c <= 0.0 && std::abs(c - std::round(c)) < 1e-9) continue;
      for (int i = 1; i <= 12; ++i) {
        const double x = (0.25 * i) / std::sqrt(alpha);
        q.max_ode_residual =
            std::max(q.max_ode_residual, ode_residual(spec, phys, E, exponent, poly, c, x));
        q.quoted_form_residual =
            std::max(q.quoted_form_residual, ode_residual(spec, phys, E, quoted, poly, c, x));
      }
    }
  }
  q.consistent = q.max_level_deviation <= 1e-12 * unit * (n_max + 1) && q.max_ode_residual <= 1e-10;
  return q;
}

LadderCheck check_ladders(const InvSquare& spec, int n_levels, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  if (n_levels < 1) throw DomainError("n_levels must be positive");
  const OracleResult o = solve_grid(make_grid_problem(spec, phys, n_levels), n_levels);
  LadderCheck lc;
  lc.oracle = o.energies;
  lc.oracle_error = o.error_estimates;
  const double top = o.energies.back();

  auto compare = [&](Branch br, double& deviation) {
    bool all = true;
    for (int n = 0;; ++n) {
      const double E = level_energy(spec, n, br, phys);
      if (E > top * (1.0 + 1e-9)) break;
      double best = std::numeric_limits<double>::infinity();
      std::size_t at = 0;
      for (std::size_t i = 0; i < o.energies.size(); ++i) {
        const double d = std::abs(o.energies[i] - E);
        if (d < best) {
          best = d;
          at = i;
        }
      }
      deviation = std::max(deviation, best);
      const double tol = std::max(10.0 * o.error_estimates[at], 1e-6 * std::abs(E));
      if (best > tol) all = false;
    }
    return all;
  };
  lc.plus_supported = compare(Branch::plus, lc.plus_deviation);
  lc.minus_supported = compare(Branch::minus, lc.minus_deviation);
  return lc;
}

}  // namespace dwell
