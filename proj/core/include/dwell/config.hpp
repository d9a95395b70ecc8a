#pragma once

#include "dwell/core.hpp"

namespace dwell {

struct RootConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 200;
  int scan_points = 2000;
  /// Also look for pairs of roots hidden inside one scan cell, where the
  /// function dips towards zero without a sign change on the grid.
  bool detect_tangent = false;

  void validate() const;
};

/// Everything a solver needs besides the potential itself.
struct SolverConfig {
  PhysConfig phys{};
  RootConfig roots{};
  /// Relative tolerance (in units of the barrier height or well depth) used
  /// when deciding whether two levels coincide.
  double match_tol_rel = 1e-6;

  void validate() const;
};

}  // namespace dwell
