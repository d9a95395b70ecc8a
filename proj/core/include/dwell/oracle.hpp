#pragma once

// Independent finite-difference eigenvalue solver for
// -(hbar^2/2m) phi'' + U phi = E phi with Dirichlet boundaries.

#include <functional>
#include <optional>
#include <vector>

#include "dwell/core.hpp"

namespace dwell {

struct GridProblem {
  double x_lo = 0.0;
  double x_hi = 1.0;
  /// Interior points of the coarse grid (the fine grid has twice as many).
  int n_points = 4000;
  std::function<double(double)> potential;
  /// Interior coordinates carrying an extra Dirichlet condition.
  std::vector<double> hard_walls;
  /// Discontinuities of the potential; cell averages are split there.
  std::vector<double> breakpoints;
  PhysConfig phys{};
  /// If set, solve_grid throws GridError when any estimate exceeds it.
  std::optional<double> max_error;

  void validate() const;
};

struct OracleResult {
  /// Richardson-extrapolated energies, ascending.
  std::vector<double> energies;
  std::vector<double> error_estimates;
  std::vector<double> coarse;
  std::vector<double> fine;
  /// Fine-grid nodes (walls excluded) and unit-normalised eigenvectors on them.
  std::vector<double> grid;
  std::vector<std::vector<double>> states;
  double step = 0.0;
};

/// Grid problem for a potential family. InvSquare with B > 0 is posed on the
/// half line x > 0, where the singular core acts as a wall.
GridProblem make_grid_problem(const PotentialSpec& spec, const PhysConfig& phys = {},
                              int n_levels = 10, int n_points = 4000);

OracleResult solve_grid(const GridProblem& problem, int n_levels);

/// Parity of a state with respect to reflection about `center`.
Parity parity_of_state(const OracleResult& result, int index, double center);
Parity parity_of_state(const GridProblem& problem, int index);

/// Interior sign changes of a sampled state, ignoring values below
/// `rel_floor` times the maximum magnitude.
int count_nodes(const std::vector<double>& values, double rel_floor = 1e-8);

}  // namespace dwell
