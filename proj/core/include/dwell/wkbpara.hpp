#pragma once

// Quasi-classical splitting and transmission through the central barrier,
// and the Hermite-function splitting of the parabolic double well.

#include "dwell/core.hpp"

namespace dwell {

/// Barrier data at energy E0. Turning points are the inner pair around the
/// barrier; the classical frequency is that of the left well at E0.
struct WkbContext {
  double energy = 0.0;
  double x_left = 0.0;
  double x_right = 0.0;
  /// (1/hbar) * integral of |p| between the inner turning points.
  /// Infinite for an impenetrable core.
  double action = 0.0;
  double w_classical = 0.0;
  /// sqrt(2 (U_top - E0) / m) at the top of the barrier.
  double v0 = 0.0;
  PhysConfig phys{};
};

/// Throws TurningPointError when E0 is not below the barrier top or the
/// inner turning points cannot be bracketed.
WkbContext wkb_action(const PotentialSpec& spec, double energy, const PhysConfig& phys = {});

/// Full doublet gap prefactor * (w hbar / pi) e^{-action}.
double wkb_splitting(const WkbContext& ctx);

/// The same gap from the quasi-classical amplitude at the barrier centre,
/// (2 hbar^2/m) phi(0) phi'(0).
double wkb_splitting_from_amplitude(const WkbContext& ctx);

/// prefactor * e^{-2 action}.
double wkb_transmission(const WkbContext& ctx);

/// Gap reconstructed from a transmission coefficient,
/// (w hbar / pi) sqrt(prefactor * D).
double splitting_from_transmission(const WkbContext& ctx, double D);

struct ParabolicLevel {
  int n = 0;
  double E_minus = 0.0;
  double E_plus = 0.0;
  /// Shift of each level from hbar w (n + 1/2): half the doublet gap.
  double delta_E_n = 0.0;
  double A_n_sq = 0.0;
  double alpha = 0.0;
  /// Normalisation with the Hermite sum as commonly quoted (no 2^{-(n-k)}
  /// weights). Equal to A_n_sq for n = 0.
  double A_n_sq_quoted = 0.0;
};

/// Throws NormalizationError when the normalisation bracket is not positive.
ParabolicLevel parabolic_splitting(const ParabolicPair& spec, int n, const PhysConfig& phys = {});

}  // namespace dwell
