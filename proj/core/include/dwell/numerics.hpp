#pragma once

// Special functions, root finding and quadrature.

#include <functional>
#include <vector>

#include "dwell/config.hpp"

namespace dwell {

using RealFn = std::function<double(double)>;

struct RootBracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

/// mantissa * exp(log_scale). Lets Kummer values far beyond double range
/// be combined in the log domain. The scale is long double so that ratios of
/// values near e^20000 keep double precision.
struct ScaledValue {
  double mantissa = 0.0;
  long double log_scale = 0.0L;

  double value() const;
  /// log|value|, -inf for zero.
  double log_abs() const;
  int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }
};

ScaledValue operator*(ScaledValue x, ScaledValue y);
ScaledValue operator*(ScaledValue x, double y);
/// x + y with the result normalised to the larger scale.
ScaledValue add(ScaledValue x, ScaledValue y);

enum class KummerPath {
  automatic,   ///< choose series, reflection or asymptotic expansion
  series,      ///< direct power series only
  transformed  ///< always e^x M(b-a, b, -x) summed as a series
};

/// Confluent hypergeometric M(a, b, x).
double kummer_m(double a, double b, double x);
ScaledValue kummer_m_scaled(double a, double b, double x, KummerPath path = KummerPath::automatic);
/// Direct power series without any transformation.
ScaledValue kummer_m_series(double a, double b, double x);

/// dM/dx = (a/b) M(a+1, b+1, x).
double kummer_m_dxi(double a, double b, double x);
ScaledValue kummer_m_dxi_scaled(double a, double b, double x,
                                KummerPath path = KummerPath::automatic);

/// Physicists' Hermite polynomial.
double hermite(int n, double x);

double erf(double x);

/// All roots of f in [lo, hi] found on a uniform scan of cfg.scan_points
/// samples. Sign changes caused by poles are discarded. With
/// cfg.detect_tangent a double root is reported twice.
std::vector<double> find_roots(const RealFn& f, double lo, double hi, const RootConfig& cfg = {});

/// As find_roots but throws NoBracketError when nothing is found.
std::vector<double> find_roots_required(const RealFn& f, double lo, double hi,
                                        const RootConfig& cfg = {});

/// Refines a single bracketed root.
double refine_root(const RealFn& f, const RootBracket& bracket, const RootConfig& cfg = {});

/// Adaptive quadrature, absolute error <= tol. Integrable endpoint
/// singularities are allowed.
double integrate(const RealFn& f, double lo, double hi, double tol = 1e-10);

/// Splits [lo, hi] at the given interior points and sums the pieces.
double integrate_pieces(const RealFn& f, double lo, double hi, const std::vector<double>& cuts,
                        double tol = 1e-10);

}  // namespace dwell
