#pragma once

// Harmonic well with an inverse-square core, U = (m w^2/2)(x^2 + B^2/x^2).
// Closed forms only.

#include <vector>

#include "dwell/core.hpp"

namespace dwell {

/// Whittaker and Kummer parameters at energy E.
struct InvSqParams {
  double alpha_scale = 0.0;  ///< m w / hbar
  double k_whittaker = 0.0;  ///< E / (2 hbar w)
  double mu = 0.0;           ///< (1/4) sqrt(1 + 4 m^2 w^2 B^2 / hbar^2)
  double a_hyp = 0.0;        ///< 1/2 - k + mu
  double c_hyp = 0.0;        ///< 1 + 2 mu
  double G = 0.0;
  double F = 0.0;
  double K = 0.0;
};

InvSqParams invsq_params(const InvSquare& spec, double energy, const PhysConfig& phys = {});

enum class Branch { plus, minus };

/// E_n^{+/-} = 2 hbar w (1/2 + n +/- mu).
double level_energy(const InvSquare& spec, int n, Branch branch, const PhysConfig& phys = {});

/// Both ladders for n = 0..n_max, merged ascending. The + ladder is tagged
/// odd and the - ladder even (exact for B = 0). For B > 0 a note records that
/// the - ladder has no counterpart in the hard-core half-line problem.
Spectrum spectrum_exact(const InvSquare& spec, int n_max, const PhysConfig& phys = {});

/// pi / w.
double period(const InvSquare& spec);

/// E_n^+ - E_n^- = hbar w sqrt(1 + 4 m^2 w^2 B^2 / hbar^2).
double splitting(const InvSquare& spec, const PhysConfig& phys = {});

/// Unnormalised shape of the small-D transmission law,
/// D ~ pi^2 (1 + t_coefficient / T^2) = pi^2 (1 + delta_coefficient Delta^2).
/// A proportionality, not a probability.
struct DShape {
  double constant = 0.0;
  double t_coefficient = 0.0;
  double delta_coefficient = 0.0;

  double in_period(double T) const;
  double in_spacing(double delta) const;
};

DShape d_dependency(const InvSquare& spec, const PhysConfig& phys = {});

/// Checks that the polynomial conditions a = -n and a - 2 mu = -n give the
/// closed-form ladders, and that the Kummer-function solutions built from
/// them satisfy the Schroedinger equation.
struct QuantizationCheck {
  /// Largest |E from the Kummer condition - closed form|.
  double max_level_deviation = 0.0;
  /// Largest relative residual of -hbar^2/2m phi'' + (U - E) phi on x > 0
  /// for phi ~ x^{1/2 +/- 2 mu} e^{-alpha x^2/2} M(., ., alpha x^2).
  double max_ode_residual = 0.0;
  /// Same residual for the x^{-1 + 2 mu} and x^{-1} prefactors in the
  /// commonly quoted form, which do not solve the equation.
  double quoted_form_residual = 0.0;
  bool consistent = false;
};

QuantizationCheck verify_quantization(const InvSquare& spec, int n_max = 5,
                                      const PhysConfig& phys = {});

/// Comparison of both ladders with the finite-difference oracle.
struct LadderCheck {
  std::vector<double> oracle;
  std::vector<double> oracle_error;
  /// Largest |oracle - E_n^+| and |oracle - E_n^-| over the compared levels.
  double plus_deviation = 0.0;
  double minus_deviation = 0.0;
  bool plus_supported = false;
  bool minus_supported = false;
};

LadderCheck check_ladders(const InvSquare& spec, int n_levels = 6, const PhysConfig& phys = {});

}  // namespace dwell
