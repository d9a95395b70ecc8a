#pragma once

// Double Morse well: Kummer-function solutions on each side of x = 0,
// oscillation levels, single-well levels and the symmetric parity systems.

#include <vector>

#include "dwell/config.hpp"
#include "dwell/numerics.hpp"

namespace dwell {

/// Dimensionless quantities at one energy. xi runs from xi_*0 at the
/// junction to X_* at the wall.
struct MorseParams {
  double s_A = 0.0;
  double s_B = 0.0;
  double n_A = 0.0;
  double n_B = 0.0;
  double lambda_A = 0.0;
  double lambda_B = 0.0;
  double xi_A0 = 0.0;
  double xi_B0 = 0.0;
  double X_A = 0.0;
  double X_B = 0.0;
  /// c1/c2 fixed by the wall conditions; infinite at isolated-well levels.
  double c1a_over_c2a = 0.0;
  double c1b_over_c2b = 0.0;
};

MorseParams morse_params(const MorsePair& spec, double energy, const PhysConfig& phys = {},
                         KummerPath path = KummerPath::automatic);

/// True when 2 s_A or 2 s_B lies within 1e-6 of an integer (in s units).
bool in_guard_band(const MorsePair& spec, double energy, const PhysConfig& phys = {});

/// Transcribed matching equation, LHS - RHS divided by |LHS| + |RHS|.
/// Throws DegenerateParameterError inside a guard band.
double residual_oscillation(const MorsePair& spec, double energy, const PhysConfig& phys = {},
                            KummerPath path = KummerPath::automatic);

/// phi_A phi_B' - phi_A' phi_B at x = 0 for the wall-satisfying solutions,
/// divided by |phi_A phi_B'| + |phi_A' phi_B|. Free of poles.
double matching_determinant(const MorsePair& spec, double energy, const PhysConfig& phys = {},
                            KummerPath path = KummerPath::automatic);

/// Single-well conditions phi_A(0) = 0 and phi_B(0) = 0 in transcribed form,
/// normalised like residual_oscillation.
double residual_left_well(const MorsePair& spec, double energy, const PhysConfig& phys = {},
                          KummerPath path = KummerPath::automatic);
double residual_right_well(const MorsePair& spec, double energy, const PhysConfig& phys = {},
                           KummerPath path = KummerPath::automatic);

/// Levels of the full well. Symmetric specs get parity labels.
Spectrum solve_oscillation_spectrum(const MorsePair& spec, const SolverConfig& cfg = {},
                                    KummerPath path = KummerPath::automatic);

/// All roots of the single-well conditions, before any exclusion.
std::vector<double> left_well_roots(const MorsePair& spec, const SolverConfig& cfg = {},
                                    KummerPath path = KummerPath::automatic);
std::vector<double> right_well_roots(const MorsePair& spec, const SolverConfig& cfg = {},
                                     KummerPath path = KummerPath::automatic);

/// Single-well levels with the ones shared by the other well removed.
/// Removed energies are listed in notes. Throws NoBoundStatesError only when
/// the condition has no roots at all.
Spectrum solve_left_well(const MorsePair& spec, const SolverConfig& cfg = {});
Spectrum solve_right_well(const MorsePair& spec, const SolverConfig& cfg = {});

/// phi(0) = 0 (odd) and phi'(0) = 0 (even) families of a symmetric spec.
Spectrum solve_symmetric_parity(const MorsePair& spec, const SolverConfig& cfg = {},
                                KummerPath path = KummerPath::automatic);

/// Roots of the transcribed equation next to each determinant root.
struct TranscriptionCheck {
  std::vector<double> determinant_roots;
  /// NaN where the transcribed residual keeps its sign around the root.
  std::vector<double> transcribed_roots;
  double max_deviation = 0.0;
  bool agrees = false;
};

TranscriptionCheck check_transcribed_equation(const MorsePair& spec, const SolverConfig& cfg = {},
                                              double tol = 1e-8);

/// phi = e^{-xi/2}(c1 xi^s F(-n, 1+2s, xi) + c2 xi^{-s} F(-n-2s, 1-2s, xi))
/// on each side. Values past the rounding floor of the two-term sum, deep in
/// the wall region, are returned as zero.
struct MorseWavefunction {
  Level level;
  MorsePair spec;
  PhysConfig phys;
  MorseParams params;
  double c1A = 0.0;
  double c2A = 0.0;
  double c1B = 0.0;
  double c2B = 0.0;
  /// Common factor exp(-log_norm) applied after the amplitudes.
  double log_norm_A = 0.0;
  double log_norm_B = 0.0;
  /// Relative mismatch of phi and phi' at x = 0.
  double value_mismatch = 0.0;
  double derivative_mismatch = 0.0;

  double operator()(double x) const;
  double derivative(double x) const;
};

MorseWavefunction wavefunction(const MorsePair& spec, const Level& level,
                               const SolverConfig& cfg = {});

}  // namespace dwell
