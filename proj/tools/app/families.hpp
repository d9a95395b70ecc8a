#pragma once

// Per-family dispatch shared by the commands.

#include <optional>
#include <vector>

#include "dwell/config.hpp"
#include "dwell/core.hpp"

namespace dwell::app::detail {

/// Levels reported when --levels is not given: all bound levels for the
/// walled families, six otherwise.
int default_levels(const PotentialSpec& spec);

/// Spectrum as reported by `solve`, truncated to `levels` (0 = default).
/// Parabolic levels come from the Hermite-function splitting, inverse-square
/// levels from both closed-form ladders.
Spectrum compute_spectrum(const PotentialSpec& spec, int levels, const PhysConfig& phys);

/// Levels the finite-difference problem can reproduce: for the inverse
/// square with B > 0 only the + ladder.
std::vector<bool> oracle_comparable(const PotentialSpec& spec, const Spectrum& sp);

struct OracleComparison {
  std::vector<std::optional<double>> oracle;
  std::vector<std::optional<double>> error;
  std::vector<std::optional<double>> deviation;
  double max_deviation = 0.0;
  int n_points = 4000;
};

OracleComparison compare_with_oracle(const PotentialSpec& spec, const Spectrum& sp,
                                     const PhysConfig& phys, int n_points = 4000);

/// Coordinate separating the left and right wells.
double split_point(const PotentialSpec& spec);

}  // namespace dwell::app::detail
