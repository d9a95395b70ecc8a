#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "dwell/numerics.hpp"

namespace dwell {

namespace {

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

void check_pole(double b) {
  if (is_nonpositive_integer(b)) {
    std::ostringstream msg;
    msg << "Kummer M undefined for b = " << b << " (non-positive integer)";
    throw PoleError(msg.str());
  }
}

// Converts a long double sum plus accumulated log scale into a ScaledValue
// whose mantissa lies in [0.5, 1).
ScaledValue normalise(long double sum, long double log_scale) {
  if (sum == 0.0L) return {0.0, 0.0};
  int e = 0;
  const long double m = std::frexp(sum, &e);
  return {static_cast<double>(m), log_scale + static_cast<long double>(e) * std::log(2.0L)};
}

ScaledValue series(double a, double b, double x) {
  constexpr long double big = 1e1000L;
  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  const long double log_big = std::log(big);
  const long double la = a, lb = b, lx = x;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double log_scale = 0.0L;
  const double kmin = std::max({0.0, std::ceil(-a), std::ceil(-b)});
  const long max_iter = 100000 + 4 * static_cast<long>(std::abs(x));
  for (long k = 0; k < max_iter; ++k) {
    const long double kk = static_cast<long double>(k);
    term *= (la + kk) / (lb + kk) * lx / (kk + 1.0L);
    sum += term;
    if (term == 0.0L) return normalise(sum, log_scale);
    if (std::abs(sum) > big || std::abs(term) > big) {
      sum /= big;
      term /= big;
      log_scale += log_big;
    }
    if (static_cast<double>(k + 1) > kmin && std::abs(term) < eps * std::abs(sum)) {
      const long double next = std::abs((la + kk + 1.0L) / (lb + kk + 1.0L) * lx / (kk + 2.0L));
      if (next < 0.5L) return normalise(sum, log_scale);
    }
  }
  std::ostringstream msg;
  msg << "Kummer series did not converge for a = " << a << ", b = " << b << ", x = " << x;
  throw ConvergenceError(msg.str());
}

ScaledValue reflected(double a, double b, double x) {
  ScaledValue v = series(b - a, b, -x);
  v.log_scale += x;
  return v;
}

// Large positive x: M ~ Gamma(b)/Gamma(a) e^x x^(a-b) sum_k (b-a)_k (1-a)_k / (k! x^k).
// Only used when the companion x^(-a) branch is negligible.
bool asymptotic(double a, double b, double x, ScaledValue& out) {
  int sb = 0, sa = 0;
  const double lgb = boost::math::lgamma(b, &sb);
  const double lga = boost::math::lgamma(a, &sa);
  const double lx = std::log(x);
  const long double log_main = static_cast<long double>(x) + (lgb - lga + (a - b) * lx);
  if (!is_nonpositive_integer(b - a)) {
    const double log_other = lgb - boost::math::lgamma(b - a) - a * lx;
    if (static_cast<double>(log_main) - log_other < 45.0) return false;
  }
  constexpr long double eps = 1e-18L;
  const long double p = b - a, q = 1.0 - a, lxx = x;
  long double term = 1.0L, sum = 1.0L, prev = std::numeric_limits<long double>::infinity();
  for (int k = 0; k < 400; ++k) {
    term *= (p + k) * (q + k) / ((k + 1.0L) * lxx);
    sum += term;
    if (std::abs(term) < eps * std::abs(sum)) {
      ScaledValue s = normalise(sum, 0.0L);
      out = {s.mantissa * sa * sb, s.log_scale + log_main};
      return true;
    }
    if (std::abs(term) > prev) return false;
    prev = std::abs(term);
  }
  return false;
}

}  // namespace

ScaledValue kummer_m_series(double a, double b, double x) {
  check_pole(b);
  if (a == 0.0 || x == 0.0) return {1.0, 0.0};
  return series(a, b, x);
}

ScaledValue kummer_m_scaled(double a, double b, double x, KummerPath path) {
  check_pole(b);
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x)) {
    throw DomainError("Kummer M requires finite arguments");
  }
  if (a == 0.0 || x == 0.0) return {1.0, 0.0};
  switch (path) {
    case KummerPath::series:
      return series(a, b, x);
    case KummerPath::transformed:
      return reflected(a, b, x);
    case KummerPath::automatic:
      break;
  }
  if (is_nonpositive_integer(a)) return series(a, b, x);
  if (x < 0.0) return reflected(a, b, x);
  if (x >= 30.0) {
    ScaledValue v;
    if (asymptotic(a, b, x, v)) return v;
  }
  return series(a, b, x);
}

double kummer_m(double a, double b, double x) { return kummer_m_scaled(a, b, x).value(); }

ScaledValue kummer_m_dxi_scaled(double a, double b, double x, KummerPath path) {
  check_pole(b);
  if (a == 0.0) return {0.0, 0.0};
  return kummer_m_scaled(a + 1.0, b + 1.0, x, path) * (a / b);
}

double kummer_m_dxi(double a, double b, double x) {
  return kummer_m_dxi_scaled(a, b, x).value();
}

}  // namespace dwell
