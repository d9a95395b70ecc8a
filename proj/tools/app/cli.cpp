#include <iostream>

#include <CLI11.hpp>

#include "app.hpp"

namespace dwell::app {

namespace {

struct Common {
  std::string family;
  std::string params;
  PhysConfig phys{};
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--potential", c.family, "square, morse, invsq or parabolic")->required();
  cmd->add_option("--params", c.params, "key=val,... (omitted keys keep their defaults)");
  cmd->add_option("--hbar", c.phys.hbar, "reduced Planck constant")->capture_default_str();
  cmd->add_option("--mass", c.phys.mass, "particle mass")->capture_default_str();
  cmd->add_option("--wkb-prefactor", c.phys.wkb_prefactor, "WKB transmission prefactor")
      ->capture_default_str();
}

PotentialSpec load(const Common& c) {
  try {
    c.phys.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return parse_potential(c.family, c.params);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-well tunneling toolkit: spectra, splittings, transmission and packet dynamics"};
  app.require_subcommand(1);

  Common solve_c, sweep_c, sim_c;
  SolveOptions solve_o;
  auto* solve = app.add_subcommand("solve", "spectrum, periods and splittings as JSON");
  add_common(solve, solve_c);
  solve->add_flag("--oracle", solve_o.oracle, "compare every level with the finite-difference oracle");
  solve->add_option("--levels", solve_o.levels, "number of levels to report (0: family default)");

  SweepOptions sweep_o;
  std::string vary;
  auto* sweep = app.add_subcommand("sweep", "CSV of a quantity over a parameter range");
  add_common(sweep, sweep_c);
  sweep->add_option("--vary", vary, "name:lo:hi:steps")->required();
  sweep->add_option("--emit", sweep_o.quantity, "D_of_T, D_of_delta, splitting, spectrum or residual")
      ->required();
  sweep->add_option("--n", sweep_o.n, "level or doublet index")->capture_default_str();
  sweep->add_option("--levels", sweep_o.levels, "columns of the spectrum sweep")->capture_default_str();

  SimulateOptions sim_o;
  auto* simulate_cmd = app.add_subcommand("simulate", "CSV time series of a wave packet");
  add_common(simulate_cmd, sim_c);
  simulate_cmd->add_option("--packet", sim_o.packet, "doublet:k, levels:i,j,..., all, ladder:plus|minus")
      ->capture_default_str();
  simulate_cmd->add_option("--t-max", sim_o.t_max, "end time (0: two predicted periods)");
  simulate_cmd->add_option("--steps", sim_o.steps, "number of time steps")->capture_default_str();

  ValidateOptions val_o;
  auto* validate_cmd = app.add_subcommand("validate", "cross-validation suite, exit 0 iff all checks pass");
  validate_cmd->add_option("--only", val_o.only, "families to run")->delimiter(',');
  validate_cmd->add_option("--perturb-u0", val_o.perturb_u0,
                           "relative U0 change on the solver side of the square-well oracle check");
  validate_cmd->add_option("--seed", val_o.seed, "seed for randomized checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadParameters;
  }

  PotentialSpec spec;
  try {
    if (*solve) spec = load(solve_c);
    if (*sweep) {
      spec = load(sweep_c);
      sweep_o.vary = parse_range(vary);
      sweep_o.phys = sweep_c.phys;
    }
    if (*simulate_cmd) {
      spec = load(sim_c);
      sim_o.phys = sim_c.phys;
    }
    if (*solve) {
      solve_o.phys = solve_c.phys;
      out << solve_document(spec, solve_o).dump(2) << '\n';
    } else if (*sweep) {
      write_sweep(out, spec, sweep_o);
    } else if (*simulate_cmd) {
      write_simulation(out, simulate(spec, sim_o));
    } else {
      const auto results = run_validation(val_o);
      write_validation_table(out, results);
      for (const auto& r : results) {
        if (!r.passed) return kCheckFailed;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kBadParameters;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailed;
  }
  return kOk;
}

}  // namespace dwell::app
