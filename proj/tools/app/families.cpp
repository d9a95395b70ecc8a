#include "families.hpp"

#include <algorithm>
#include <cmath>

#include "dwell/invsq.hpp"
#include "dwell/morse.hpp"
#include "dwell/oracle.hpp"
#include "dwell/squarewell.hpp"
#include "dwell/wkbpara.hpp"

namespace dwell::app::detail {

int default_levels(const PotentialSpec& spec) {
  return std::holds_alternative<SquareWell>(spec) || std::holds_alternative<MorsePair>(spec) ? 0 : 6;
}

namespace {

void truncate(Spectrum& sp, int levels) {
  if (levels > 0 && static_cast<int>(sp.levels.size()) > levels) sp.levels.resize(levels);
}

}  // namespace

Spectrum compute_spectrum(const PotentialSpec& spec, int levels, const PhysConfig& phys) {
  if (levels < 0) throw DomainError("level count must be non-negative");
  SolverConfig cfg;
  cfg.phys = phys;
  if (levels == 0) levels = default_levels(spec);
  Spectrum sp;
  if (const auto* s = std::get_if<SquareWell>(&spec)) {
    sp = solve_spectrum(*s, cfg);
  } else if (const auto* m = std::get_if<MorsePair>(&spec)) {
    sp = solve_oscillation_spectrum(*m, cfg);
  } else if (const auto* inv = std::get_if<InvSquare>(&spec)) {
    sp = spectrum_exact(*inv, (levels + 1) / 2, phys);
  } else {
    const auto& p = std::get<ParabolicPair>(spec);
    sp.potential = p;
    for (int n = 0; n < (levels + 1) / 2; ++n) {
      const ParabolicLevel l = parabolic_splitting(p, n, phys);
      const bool even_low = l.delta_E_n >= 0.0;
      sp.levels.push_back({l.E_minus, 0, even_low ? Parity::even : Parity::odd, Well::both});
      sp.levels.push_back({l.E_plus, 0, even_low ? Parity::odd : Parity::even, Well::both});
    }
    finalize(sp);
  }
  truncate(sp, levels);
  return sp;
}

std::vector<bool> oracle_comparable(const PotentialSpec& spec, const Spectrum& sp) {
  std::vector<bool> keep(sp.levels.size(), true);
  if (const auto* inv = std::get_if<InvSquare>(&spec); inv && inv->B > 0.0) {
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = sp.levels[i].parity == Parity::odd;
  }
  return keep;
}

OracleComparison compare_with_oracle(const PotentialSpec& spec, const Spectrum& sp,
                                     const PhysConfig& phys, int n_points) {
  const std::vector<bool> keep = oracle_comparable(spec, sp);
  const int n = static_cast<int>(std::count(keep.begin(), keep.end(), true));
  OracleComparison out;
  out.n_points = n_points;
  out.oracle.assign(sp.levels.size(), std::nullopt);
  out.error = out.deviation = out.oracle;
  if (n == 0) return out;
  const OracleResult r = solve_grid(make_grid_problem(spec, phys, n, n_points), n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < sp.levels.size() && j < r.energies.size(); ++i) {
    if (!keep[i]) continue;
    out.oracle[i] = r.energies[j];
    out.error[i] = r.error_estimates[j];
    const double dev = std::abs(sp.levels[i].energy - r.energies[j]);
    out.deviation[i] = dev;
    out.max_deviation = std::max(out.max_deviation, dev);
    ++j;
  }
  return out;
}

double split_point(const PotentialSpec& spec) {
  if (const auto* s = std::get_if<SquareWell>(&spec)) return 0.5 * (s->a - s->c);
  return 0.0;
}

}  // namespace dwell::app::detail
