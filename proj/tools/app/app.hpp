#pragma once

// Command implementations behind the `dwell` executable. Kept in a library so
// that tests and the acceptance harness can drive them without a subprocess.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dwell/core.hpp"

namespace dwell::app {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadParameters = 2, kSolverFailed = 3 };

/// Malformed or inconsistent command-line input. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "key=val,key=val" into a map. Duplicate keys and non-numeric values are
/// rejected.
std::map<std::string, double> parse_key_values(std::string_view text);

/// Family name plus parameter list. Omitted keys keep the family defaults;
/// unknown keys and values that fail validation raise UsageError.
PotentialSpec parse_potential(std::string_view family, std::string_view params);

/// The parameters of a spec as a key/value map, in the order used on input.
std::vector<std::pair<std::string, double>> potential_parameters(const PotentialSpec& spec);

/// Copy of spec with one named parameter replaced; the result is validated.
PotentialSpec with_parameter(const PotentialSpec& spec, const std::string& name, double value);

/// %.17g, with "nan", "inf" and "-inf" spelled out.
std::string format_number(double x);

struct SolveOptions {
  /// Number of levels to report; 0 keeps every bound level (square, Morse)
  /// or six levels (inverse square) or three doublets (parabolic).
  int levels = 0;
  bool oracle = false;
  PhysConfig phys{};
};

nlohmann::json solve_document(const PotentialSpec& spec, const SolveOptions& opts);

struct SweepRange {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  double at(int i) const;
};

/// "name:lo:hi:steps", steps >= 2 unless lo == hi.
SweepRange parse_range(std::string_view text);

struct SweepOptions {
  std::string quantity;
  SweepRange vary;
  /// Level index for D_of_T, D_of_delta and the parabolic splitting.
  int n = 0;
  /// Columns of the `spectrum` sweep.
  int levels = 6;
  PhysConfig phys{};
};

inline const std::vector<std::string> kSweepQuantities{"D_of_T", "D_of_delta", "splitting",
                                                       "spectrum", "residual"};

void write_sweep(std::ostream& out, const PotentialSpec& spec, const SweepOptions& opts);

struct SimulateOptions {
  /// "doublet:k", "levels:i,j,...", "all" or, for the inverse square,
  /// "ladder:plus" / "ladder:minus".
  std::string packet = "doublet:0";
  double t_max = 0.0;  ///< 0 picks two predicted periods
  int steps = 200;
  PhysConfig phys{};
};

struct SimulationRow {
  double t = 0.0;
  double autocorrelation = 0.0;
  double p_left = 0.0;
  double p_right = 0.0;
};

struct Simulation {
  std::vector<SimulationRow> rows;
  std::vector<double> energies;
  std::optional<double> predicted_period;
  /// First return of P_left to within 1e-3 of its initial value, refined to
  /// the maximum of P_left inside that window.
  std::optional<double> measured_period;
  /// |autocorrelation| at the predicted period.
  std::optional<double> revival;
  std::string state_source;
};

Simulation simulate(const PotentialSpec& spec, const SimulateOptions& opts);
void write_simulation(std::ostream& out, const Simulation& sim);

struct CheckResult {
  int criterion = 0;
  std::string family;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidateOptions {
  /// Families to run; empty runs all of them.
  std::vector<std::string> only;
  /// Relative change of U0 applied to the solver side of the square-well
  /// oracle comparison (negative control).
  double perturb_u0 = 0.0;
  unsigned seed = 20240611u;
};

/// Family tags accepted by ValidateOptions::only.
const std::vector<std::string>& validation_families();

std::vector<CheckResult> run_validation(const ValidateOptions& opts);
void write_validation_table(std::ostream& out, const std::vector<CheckResult>& results);

/// Entry point of the executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dwell::app
