#include <cmath>
#include <numbers>

#include "dwell/numerics.hpp"
#include "dwell/wkbpara.hpp"

namespace dwell {

ParabolicLevel parabolic_splitting(const ParabolicPair& spec, int n, const PhysConfig& phys) {
  spec.validate();
  phys.validate();
  if (n < 0) throw DomainError("level index must be non-negative");
  ParabolicLevel lv;
  lv.n = n;
  lv.alpha = std::sqrt(phys.mass * spec.w / phys.hbar);
  const double s = lv.alpha * spec.a;
  const double gauss = std::exp(-s * s);

  // Integral of e^{-t^2} H_n(t)^2 over t > -s, divided by 2^n n!:
  // (sqrt(pi)/2)(1 + erf s) - e^{-s^2} sum_{j=1..n} H_j H_{j-1} / (2^j j!).
  double sum = 0.0;
  double sum_quoted = 0.0;
  double j_fact = 1.0;
  double two_j = 1.0;
  for (int j = 1; j <= n; ++j) {
    j_fact *= j;
    two_j *= 2.0;
    const double term = hermite(j, s) * hermite(j - 1, s) / j_fact;
    sum += term / two_j;
    sum_quoted += term;
  }
  const double head = 0.5 * std::sqrt(std::numbers::pi) * (1.0 + erf(s));
  const double bracket = head - gauss * sum;
  if (!(bracket > 0.0)) throw NormalizationError("normalisation bracket is not positive");
  double norm = 1.0;  // 2^n n!
  for (int k = 1; k <= n; ++k) norm *= 2.0 * k;
  lv.A_n_sq = lv.alpha / (norm * bracket);
  const double bracket_quoted = head - gauss * sum_quoted;
  lv.A_n_sq_quoted = lv.alpha / (norm * bracket_quoted);

  // phi(0) phi'(0) of the right-well state; H_{-1} is taken as 0.
  const double hn = hermite(n, s);
  const double hm = n > 0 ? hermite(n - 1, s) : 0.0;
  lv.delta_E_n = phys.hbar * phys.hbar / phys.mass * lv.A_n_sq * gauss * hn *
                 (lv.alpha * lv.alpha * spec.a * hn - 2.0 * n * lv.alpha * hm);
  const double center = phys.hbar * spec.w * (n + 0.5);
  lv.E_minus = center - lv.delta_E_n;
  lv.E_plus = center + lv.delta_E_n;
  return lv;
}

}  // namespace dwell
