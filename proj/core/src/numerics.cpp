#include "dwell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace dwell {

void RootConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("root tolerances must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be positive");
  if (scan_points < 2) throw DomainError("scan_points must be at least 2");
}

void SolverConfig::validate() const {
  phys.validate();
  roots.validate();
  if (!(match_tol_rel > 0.0)) throw DomainError("match_tol_rel must be positive");
}

double ScaledValue::value() const {
  if (mantissa == 0.0) return 0.0;
  return mantissa * static_cast<double>(std::exp(log_scale));
}

double ScaledValue::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + static_cast<double>(log_scale);
}

ScaledValue operator*(ScaledValue x, ScaledValue y) {
  return {x.mantissa * y.mantissa, x.log_scale + y.log_scale};
}

ScaledValue operator*(ScaledValue x, double y) { return {x.mantissa * y, x.log_scale}; }

ScaledValue add(ScaledValue x, ScaledValue y) {
  if (x.mantissa == 0.0) return y;
  if (y.mantissa == 0.0) return x;
  if (x.log_scale < y.log_scale) std::swap(x, y);
  const long double shift = y.log_scale - x.log_scale;
  return {x.mantissa + y.mantissa * static_cast<double>(std::exp(shift)), x.log_scale};
}

double hermite(int n, double x) {
  if (n < 0) throw DomainError("Hermite degree must be non-negative");
  double h_prev = 1.0;
  if (n == 0) return h_prev;
  double h = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * h - 2.0 * k * h_prev;
    h_prev = h;
    h = next;
  }
  return h;
}

double erf(double x) { return std::erf(x); }

double refine_root(const RealFn& f, const RootBracket& bracket, const RootConfig& cfg) {
  if (bracket.f_lo == 0.0) return bracket.lo;
  if (bracket.f_hi == 0.0) return bracket.hi;
  if (bracket.f_lo * bracket.f_hi > 0.0) throw NoBracketError("interval does not bracket a root");
  const auto tol = [&](double l, double r) {
    return std::abs(r - l) <= cfg.abs_tol + cfg.rel_tol * std::min(std::abs(l), std::abs(r));
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_iter);
  const auto [l, r] = boost::math::tools::toms748_solve(f, bracket.lo, bracket.hi, bracket.f_lo,
                                                         bracket.f_hi, tol, iters);
  if (iters >= static_cast<std::uintmax_t>(cfg.max_iter) && !tol(l, r)) {
    throw ConvergenceError("root refinement did not converge");
  }
  return 0.5 * (l + r);
}

namespace {

struct Refined {
  double root;
  bool pole;
};

// Sign change between two samples. A pole shows up as |f| growing while the
// bracket shrinks; a root as |f| falling.
Refined refine_sign_change(const RealFn& f, double xl, double xr, double fl, double fr,
                           const RootConfig& cfg) {
  const auto tol = [&](double l, double r) {
    return std::abs(r - l) <= cfg.abs_tol + cfg.rel_tol * std::min(std::abs(l), std::abs(r));
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_iter);
  std::pair<double, double> br;
  try {
    br = boost::math::tools::toms748_solve(f, xl, xr, fl, fr, tol, iters);
  } catch (const boost::math::evaluation_error&) {
    return {0.0, true};
  }
  const double gl = f(br.first);
  const double gr = f(br.second);
  if (!std::isfinite(gl) || !std::isfinite(gr)) return {0.0, true};
  const double refined = std::min(std::abs(gl), std::abs(gr));
  const double grid = std::max(std::abs(fl), std::abs(fr));
  if (refined > grid) return {0.0, true};
  double root = 0.5 * (br.first + br.second);
  if (gl == 0.0) root = br.first;
  if (gr == 0.0) root = br.second;
  return {root, false};
}

}  // namespace

std::vector<double> find_roots(const RealFn& f, double lo, double hi, const RootConfig& cfg) {
  cfg.validate();
  if (!(lo < hi)) throw DomainError("find_roots requires lo < hi");
  const int n = cfg.scan_points;
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    fs[i] = f(xs[i]);
  }

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < n && std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) && fs[i + 1] != 0.0 &&
        (fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
      const Refined r = refine_sign_change(f, xs[i], xs[i + 1], fs[i], fs[i + 1], cfg);
      if (!r.pole) roots.push_back(r.root);
    }
  }

  std::vector<double> doubles;
  if (cfg.detect_tangent) {
    for (int i = 1; i + 1 < n; ++i) {
      const double fl = fs[i - 1], fm = fs[i], fr = fs[i + 1];
      if (!std::isfinite(fl) || !std::isfinite(fm) || !std::isfinite(fr) || fm == 0.0) continue;
      const bool same_sign = (fl > 0.0) == (fm > 0.0) && (fm > 0.0) == (fr > 0.0);
      if (!same_sign || !(std::abs(fm) < std::abs(fl)) || !(std::abs(fm) <= std::abs(fr))) continue;
      const double sgn = fm > 0.0 ? 1.0 : -1.0;
      const auto g = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? sgn * v : std::numeric_limits<double>::max();
      };
      std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_iter);
      auto [xmin, gmin] = boost::math::tools::brent_find_minima(
          g, xs[i - 1], xs[i + 1], std::numeric_limits<double>::digits / 2 + 8, iters);
      // Brent locates the minimum only to ~sqrt(eps); polish with parabolic
      // vertex steps so a double root drops to rounding level.
      for (double rel : {1e-6, 1e-8, 1e-10}) {
        const double h = rel * std::max(std::abs(xmin), xs[i + 1] - xs[i - 1]);
        const double gm = g(xmin - h), gp = g(xmin + h);
        const double curv = gp - 2.0 * gmin + gm;
        if (!(curv > 0.0)) continue;
        const double x_new = xmin - h * (gp - gm) / (2.0 * curv);
        if (!(x_new > xs[i - 1] && x_new < xs[i + 1])) continue;
        const double g_new = g(x_new);
        if (g_new < gmin) {
          xmin = x_new;
          gmin = g_new;
        }
      }
      const double scale = std::max(std::abs(fl), std::abs(fr));
      if (gmin < 0.0) {
        const double fmin = sgn * gmin;
        const Refined a = refine_sign_change(f, xs[i - 1], xmin, fl, fmin, cfg);
        const Refined b = refine_sign_change(f, xmin, xs[i + 1], fmin, fr, cfg);
        if (!a.pole && !b.pole) {
          roots.push_back(a.root);
          roots.push_back(b.root);
        }
      } else if (gmin <= 1e-10 * scale) {
        doubles.push_back(xmin);
      }
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back()) <= cfg.abs_tol) continue;
    out.push_back(r);
  }
  for (double d : doubles) {
    std::erase_if(out, [&](double r) { return std::abs(r - d) <= cfg.abs_tol; });
    out.push_back(d);
    out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> find_roots_required(const RealFn& f, double lo, double hi,
                                        const RootConfig& cfg) {
  auto roots = find_roots(f, lo, hi, cfg);
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no sign change found on [" << lo << ", " << hi << "]";
    throw NoBracketError(msg.str());
  }
  return roots;
}

double integrate(const RealFn& f, double lo, double hi, double tol) {
  if (lo == hi) return 0.0;
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (lo > hi) return -integrate(f, hi, lo, tol);
  thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double err = 0.0;
  double l1 = 0.0;
  try {
    const double v = ts.integrate(f, lo, hi, 1e-13, &err, &l1);
    if (std::isfinite(v) && err <= std::max(tol, 64.0 * eps * l1)) return v;
  } catch (const std::exception&) {
    // fall through to Gauss-Kronrod
  }
  if (std::isfinite(lo) && std::isfinite(hi)) {
    double gk_err = 0.0;
    double gk_l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo, hi, 20, 1e-13, &gk_err, &gk_l1);
    if (std::isfinite(v) && gk_err <= std::max(tol, 64.0 * eps * gk_l1)) return v;
    err = gk_err;
  }
  std::ostringstream msg;
  msg << "quadrature on [" << lo << ", " << hi << "] reached error " << err << " > " << tol;
  throw QuadratureError(msg.str());
}

double integrate_pieces(const RealFn& f, double lo, double hi, const std::vector<double>& cuts,
                        double tol) {
  std::vector<double> pts{lo};
  for (double c : cuts) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  const double piece_tol = tol / static_cast<double>(pts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += integrate(f, pts[i], pts[i + 1], piece_tol);
  }
  return total;
}

}  // namespace dwell
