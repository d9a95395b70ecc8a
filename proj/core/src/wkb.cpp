#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dwell/numerics.hpp"
#include "dwell/wkbpara.hpp"

namespace dwell {

namespace {

struct Barrier {
  double x_top = 0.0;
  double u_top = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_wall = false;
  bool hi_wall = false;
};

Barrier locate_barrier(const PotentialSpec& spec, double energy, const PhysConfig& phys) {
  Barrier b;
  const auto reach = [&](double w) {
    return 2.0 * std::sqrt(2.0 * std::abs(energy) / (phys.mass * w * w)) + 1.0;
  };
  if (const auto* s = std::get_if<SquareWell>(&spec)) {
    b.x_top = 0.5 * (s->a - s->c);
    b.lo = -s->d;
    b.hi = s->b;
    b.lo_wall = b.hi_wall = true;
  } else if (const auto* m = std::get_if<MorsePair>(&spec)) {
    b.lo = -m->d;
    b.hi = m->b;
    b.lo_wall = b.hi_wall = true;
  } else if (const auto* inv = std::get_if<InvSquare>(&spec)) {
    b.hi = inv->B + reach(inv->w);
    b.lo = -b.hi;
  } else {
    const auto& p = std::get<ParabolicPair>(spec);
    b.hi = p.a + reach(p.w);
    b.lo = -b.hi;
  }
  if (const auto* inv = std::get_if<InvSquare>(&spec); inv && inv->B > 0.0) {
    b.u_top = std::numeric_limits<double>::infinity();
  } else {
    const double eps = 1e-12 * (1.0 + std::abs(b.x_top));
    b.u_top = std::min(evaluate_potential(spec, b.x_top - eps, phys),
                       evaluate_potential(spec, b.x_top + eps, phys));
  }
  return b;
}

// Walks from `from` towards `to` and returns the first cell on which
// U - E changes to the requested sign.
std::optional<RootBracket> first_crossing(const RealFn& f, double from, double to, bool want_positive,
                                          int steps = 20000) {
  const double h = (to - from) / steps;
  double x_prev = from;
  double f_prev = f(from);
  for (int i = 1; i <= steps; ++i) {
    const double x = i == steps ? to : from + i * h;
    const double fx = f(x);
    if ((fx > 0.0) == want_positive && (f_prev > 0.0) != want_positive) {
      if (x_prev < x) return RootBracket{x_prev, x, f_prev, fx};
      return RootBracket{x, x_prev, fx, f_prev};
    }
    x_prev = x;
    f_prev = fx;
  }
  return std::nullopt;
}

std::vector<double> cuts_inside(const PotentialSpec& spec, double lo, double hi) {
  // Step edges that coincide with a turning point are not cut again.
  const double margin = 1e-12 * (hi - lo);
  std::vector<double> out;
  for (double c : breakpoints(spec)) {
    if (c > lo + margin && c < hi - margin) out.push_back(c);
  }
  return out;
}

}  // namespace

WkbContext wkb_action(const PotentialSpec& spec, double energy, const PhysConfig& phys) {
  validate(spec);
  phys.validate();
  const Barrier bar = locate_barrier(spec, energy, phys);
  if (!(energy < bar.u_top)) throw TurningPointError("energy is not below the barrier top");

  const RealFn f = [&](double x) { return evaluate_potential(spec, x, phys) - energy; };
  const double start_eps = 1e-9 * (bar.hi - bar.lo);
  const auto left = first_crossing(f, bar.x_top - start_eps, bar.lo, false);
  const auto right = first_crossing(f, bar.x_top + start_eps, bar.hi, false);
  if (!left || !right) throw TurningPointError("no classically allowed region on both sides");

  RootConfig rc;
  rc.abs_tol = 1e-15;
  rc.rel_tol = 1e-15;
  WkbContext ctx;
  ctx.energy = energy;
  ctx.phys = phys;
  ctx.x_left = refine_root(f, *left, rc);
  ctx.x_right = refine_root(f, *right, rc);

  // A second inner crossing between the barrier and the turning point would
  // mean the barrier is not a single hump.
  if (first_crossing(f, ctx.x_left, bar.x_top - start_eps, false, 2000) ||
      first_crossing(f, ctx.x_right, bar.x_top + start_eps, false, 2000)) {
    throw TurningPointError("more than two inner turning points");
  }

  if (std::isinf(bar.u_top)) {
    ctx.action = std::numeric_limits<double>::infinity();
    ctx.v0 = std::numeric_limits<double>::infinity();
  } else {
    const RealFn p = [&](double x) {
      return std::sqrt(2.0 * phys.mass * std::max(f(x), 0.0)) / phys.hbar;
    };
    ctx.action = integrate_pieces(p, ctx.x_left, ctx.x_right,
                                  cuts_inside(spec, ctx.x_left, ctx.x_right), 1e-12);
    ctx.v0 = std::sqrt(2.0 * (bar.u_top - energy) / phys.mass);
  }

  double outer = bar.lo;
  if (const auto wall = first_crossing(f, ctx.x_left, bar.lo, true)) {
    outer = refine_root(f, *wall, rc);
  } else if (!bar.lo_wall) {
    throw TurningPointError("left well has no outer turning point");
  }
  // x = mid + half sin(t) turns the inverse square-root end singularities
  // into a smooth integrand. A shallow Gauss-Kronrod keeps its nodes away from the ends,
  // where the rounding of the turning points would dominate |E - U|.
  const double mid = 0.5 * (outer + ctx.x_left);
  const double half = 0.5 * (ctx.x_left - outer);
  const auto inv_v = [&](double t) {
    const double r = std::sin(0.25 * std::numbers::pi - 0.5 * std::abs(t));
    const double u = 2.0 * r * r;  // 1 - |sin t|
    const double x = t > 0.0 ? ctx.x_left - half * u : outer + half * u;
    return half * std::sqrt(u * (2.0 - u)) / std::sqrt(2.0 * std::abs(f(x)) / phys.mass);
  };
  std::vector<double> ts{-0.5 * std::numbers::pi};
  for (double c : cuts_inside(spec, outer, ctx.x_left)) ts.push_back(std::asin((c - mid) / half));
  ts.push_back(0.5 * std::numbers::pi);
  double half_period = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    double err = 0.0;
    half_period += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        inv_v, ts[i], ts[i + 1], 4, 1e-13, &err);
    if (!(err <= 1e-9 * std::abs(half_period))) {
      throw QuadratureError("classical period quadrature did not converge");
    }
  }
  ctx.w_classical = std::numbers::pi / half_period;
  return ctx;
}

double wkb_splitting(const WkbContext& ctx) {
  return ctx.phys.wkb_prefactor * ctx.w_classical * ctx.phys.hbar / std::numbers::pi *
         std::exp(-ctx.action);
}

double wkb_splitting_from_amplitude(const WkbContext& ctx) {
  const double h = ctx.phys.hbar;
  const double m = ctx.phys.mass;
  const double phi0 = std::sqrt(ctx.w_classical / (2.0 * std::numbers::pi * ctx.v0)) *
                      std::exp(-0.5 * ctx.action);
  const double dphi0 = m * ctx.v0 / h * phi0;
  return ctx.phys.wkb_prefactor * 2.0 * h * h / m * phi0 * dphi0;
}

double wkb_transmission(const WkbContext& ctx) {
  return ctx.phys.wkb_prefactor * std::exp(-2.0 * ctx.action);
}

double splitting_from_transmission(const WkbContext& ctx, double D) {
  if (D < 0.0) throw DomainError("transmission coefficient must be non-negative");
  return ctx.w_classical * ctx.phys.hbar / std::numbers::pi *
         std::sqrt(ctx.phys.wkb_prefactor * D);
}

}  // namespace dwell
