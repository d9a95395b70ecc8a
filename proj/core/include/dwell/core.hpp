#pragma once

// Shared domain types: physical constants, the four double-well families,
// levels and spectra.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dwell/errors.hpp"

namespace dwell {

/// Physical constants. Everything defaults to dimensionless units.
struct PhysConfig {
  double hbar = 1.0;
  double mass = 1.0;
  /// Proportionality constant of the WKB transmission formula.
  double wkb_prefactor = 1.0;

  void validate() const;
};

/// Infinite square double well. Walls at -d and b, barrier of height U0 on
/// [-c, a], left floor 0, right floor -W0.
struct SquareWell {
  double d = 2.0;
  double c = 1.0;
  double a = 1.0;
  double b = 2.0;
  double U0 = 5.0;
  double W0 = 0.0;

  double left_width() const { return d - c; }
  double barrier_width() const { return a + c; }
  double right_width() const { return b - a; }
  bool is_symmetric() const { return d == b && c == a && W0 == 0.0; }
  void validate() const;
};

/// Two Morse wells joined at x = 0, minima at x = -c (depth A) and x = a
/// (depth B), hard walls at -d and b.
struct MorsePair {
  double A = 20.0;
  double B = 20.0;
  double alpha = 2.0;
  double beta = 2.0;
  double c = 2.0;
  double a = 2.0;
  double d = 6.0;
  double b = 6.0;

  bool is_symmetric() const {
    return A == B && alpha == beta && c == a && d == b;
  }
  void validate() const;
};

/// U(x) = (m w^2 / 2)(x^2 + B^2 / x^2).
struct InvSquare {
  double w = 1.0;
  double B = 0.0;

  void validate() const;
};

/// Two harmonic wells centred at -a and a with a cusp at the origin.
struct ParabolicPair {
  double w = 1.0;
  double a = 2.0;

  void validate() const;
};

using PotentialSpec = std::variant<SquareWell, MorsePair, InvSquare, ParabolicPair>;

enum class Parity { even, odd, none };
enum class Well { left, right, both };

std::string_view to_string(Parity p);
std::string_view to_string(Well w);
std::string_view family_name(const PotentialSpec& spec);

void validate(const PotentialSpec& spec);
bool is_symmetric(const PotentialSpec& spec);

struct Level {
  double energy = 0.0;
  int index = 0;
  Parity parity = Parity::none;
  Well well = Well::both;
};

/// Bound-state energies in ascending order. Energies are strictly ascending
/// except for doublets that are degenerate to machine precision, which are
/// reported twice and recorded in `notes`.
struct Spectrum {
  std::vector<Level> levels;
  PotentialSpec potential;
  int count_bound = 0;
  std::vector<std::string> notes;

  std::vector<double> energies() const;
  bool empty() const { return levels.empty(); }
  std::size_t size() const { return levels.size(); }
};

/// Sorts levels by energy, renumbers indices and sets count_bound.
void finalize(Spectrum& spectrum);

/// Closed interval on which a family is defined. InvSquare and ParabolicPair
/// live on the whole line.
struct Interval {
  double lo;
  double hi;
};
Interval natural_domain(const PotentialSpec& spec);

/// Coordinates where the potential is discontinuous or singular.
std::vector<double> breakpoints(const PotentialSpec& spec);

/// Potential energy at x. Throws DomainError outside the domain or at the
/// InvSquare singularity.
double evaluate_potential(const PotentialSpec& spec, double x, const PhysConfig& phys = {});

}  // namespace dwell
