#pragma once

// Infinite square double well: spectra, wavefunctions, scattering,
// linearized spectrum and level classification.

#include <vector>

#include "dwell/config.hpp"

namespace dwell {

/// k in the left well, k3 in the right well, chi under the barrier.
/// Below zero energy the left well is classically forbidden and k holds
/// the decay constant instead.
struct SquareWavenumbers {
  double k = 0.0;
  double k3 = 0.0;
  double chi = 0.0;
  bool left_evanescent = false;
};

SquareWavenumbers wavenumbers(const SquareWell& spec, double energy, const PhysConfig& phys = {});

/// Matching determinant of the full well. Zero exactly at eigenvalues and
/// free of poles; `scale` bounds the size of its terms.
struct SquareResidual {
  double value = 0.0;
  double scale = 1.0;
  double relative() const { return value / scale; }
};
SquareResidual square_residual(const SquareWell& spec, double energy, const PhysConfig& phys = {});

Spectrum solve_spectrum_asymmetric(const SquareWell& spec, const SolverConfig& cfg = {});

/// Even and odd levels of a symmetric well, solved separately in k.
/// Within every doublet the even level lies lower.
Spectrum solve_spectrum_symmetric(const SquareWell& spec, const SolverConfig& cfg = {});

/// Graphical form of the symmetric level condition at wavenumber k.
/// f1 = kL; f2 = pi m - atan2(1, z) on the branch m nearest to f1. The
/// phases kL + atan2(1, z) grow monotonically in k and equal pi m at levels.
struct SymmetricCurves {
  double k = 0.0;
  double f1 = 0.0;
  double f2_even = 0.0;
  double f2_odd = 0.0;
  double phase_even = 0.0;
  double phase_odd = 0.0;
};
SymmetricCurves symmetric_curves(const SquareWell& spec, double k, const PhysConfig& phys = {});

/// Dispatches on spec.is_symmetric().
Spectrum solve_spectrum(const SquareWell& spec, const SolverConfig& cfg = {});

/// phi = a1 sin(k(x+d)) on the left, a2 e^{chi x} + b2 e^{-chi x} in the
/// barrier and a3 sin(k3(x-b)) on the right. When the left well is
/// forbidden the left sine becomes sinh.
struct SquareWavefunction {
  Level level;
  SquareWell spec;
  SquareWavenumbers wn;
  double a1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  double a3 = 0.0;
  /// +1 or -1 for a symmetric well, 0 otherwise.
  int parity_sign = 0;
  /// a1 from the closed-form normalisation, NaN below zero energy.
  double a1_closed_form = 0.0;
  /// |a1_closed_form - a1| / a1
  double a1_discrepancy = 0.0;

  double operator()(double x) const;
  double derivative(double x) const;
};

SquareWavefunction wavefunction(const SquareWell& spec, const Level& level,
                                const SolverConfig& cfg = {});

struct ScatteringSolution {
  double energy = 0.0;
  double D = 0.0;
  double R = 0.0;
};

ScatteringSolution transmission(const SquareWell& spec, double energy, const PhysConfig& phys = {});

struct LinearizedSpectrum {
  double k0 = 0.0;
  double E0 = 0.0;
  double delta = 0.0;
  double period = 0.0;
  /// Highest emitted n; -1 when no level fits below U0.
  int N = -1;
  std::vector<double> k;
  std::vector<double> energies;
};

LinearizedSpectrum linearized_spectrum(const SquareWell& spec, const PhysConfig& phys = {});

/// Period in the impenetrable and fully transparent limits.
double limiting_period(const SquareWell& spec, const PhysConfig& phys = {});

double d_of_period(const SquareWell& spec, int n, double period, const PhysConfig& phys = {});
double d_of_delta(const SquareWell& spec, int n, double delta, const PhysConfig& phys = {});

struct LevelClass {
  Level level;
  /// 1: shared by both wells, 2: reached through a barrier transition,
  /// 3: fully reflected box level.
  int tunneling_case = 1;
  double nearest_left = 0.0;
  double nearest_right = 0.0;
};

struct ClassificationReport {
  std::vector<double> box_left;
  std::vector<double> box_right;
  std::vector<double> left_barrier;
  std::vector<double> right_barrier;
  std::vector<LevelClass> levels;
  double match_tol = 0.0;
};

ClassificationReport classify_levels(const SquareWell& spec, const SolverConfig& cfg = {});

}  // namespace dwell
