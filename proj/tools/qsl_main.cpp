#include <array>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qsl/cli.hpp"

namespace {

std::array<double, 4> parse_state(const std::vector<double>& values) {
  if (values.size() == 2) {
    // two reals: (a1, a2) with zero imaginary parts
    return {values[0], 0.0, values[1], 0.0};
  }
  if (values.size() == 4) {
    return {values[0], values[1], values[2], values[3]};
  }
  throw CLI::ValidationError(
      "--state takes 'a1,a2' (reals) or 're1,im1,re2,im2'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qsl - driven-qubit speed limits: exact simulation, minimum-time "
      "gate synthesis, and numerical bound stress-tests"};
  app.require_subcommand(1);
  std::function<int()> action;

  // bound
  auto* bound = app.add_subcommand(
      "bound", "Evaluate minimum-time bounds for a gate or rotation");
  auto bound_opt = std::make_shared<qsl::cli::BoundOptions>();
  double bound_theta = 0, bound_alpha = 0, bound_lambda = 0, bound_energy = 0;
  auto* bt = bound->add_option("--theta", bound_theta,
                               "gate phase shift (radians)");
  auto* ba = bound->add_option("--alpha", bound_alpha,
                               "rotation angle in [0, pi/2] (radians)");
  auto* bw = bound->add_option("--wavelength", bound_lambda,
                               "transition wavelength in meters (SI mode)");
  auto* be = bound->add_option("--energy", bound_energy,
                               "time-averaged energy (natural units, or "
                               "joules with --units si)");
  bound->add_option("--units", bound_opt->units, "natural|si")
      ->check(CLI::IsMember({"natural", "si"}));
  bound->add_flag("--degrees", bound_opt->degrees,
                  "interpret angles as degrees");
  bound->add_flag("--json", bound_opt->as_json, "emit JSON");
  bound->callback([&, bound_opt] {
    if (*bt) bound_opt->theta = bound_theta;
    if (*ba) bound_opt->alpha = bound_alpha;
    if (*bw) bound_opt->wavelength = bound_lambda;
    if (*be) bound_opt->energy = bound_energy;
    action = [bound_opt] {
      return qsl::cli::run_bound(*bound_opt, std::cout, std::cerr);
    };
  });

  // synthesize
  auto* synth = app.add_subcommand(
      "synthesize", "Construct a minimum-time gate Hamiltonian");
  auto synth_opt = std::make_shared<qsl::cli::SynthesizeOptions>();
  synth->add_option("--theta", synth_opt->theta, "gate phase shift (radians)")
      ->required();
  synth->add_option("--energy", synth_opt->energy,
                    "target time-averaged energy (natural units)")
      ->required();
  synth->add_option("--out", synth_opt->out_path,
                    "output path for the Hamiltonian spec JSON")
      ->required();
  synth->add_option("--report", synth_opt->report_path,
                    "output path for the verification report "
                    "(default <out>.report.json)");
  synth->add_option("--tol", synth_opt->tol,
                    "saturation tolerance on the normalized product");
  synth->add_flag("--degrees", synth_opt->degrees,
                  "interpret --theta as degrees");
  synth->callback([&, synth_opt] {
    action = [synth_opt] {
      return qsl::cli::run_synthesize(*synth_opt, std::cout, std::cerr);
    };
  });

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Evolve a state under a Hamiltonian spec, emitting CSV");
  auto sim_opt = std::make_shared<qsl::cli::SimulateOptions>();
  std::vector<double> state_values;
  sim->add_option("--spec", sim_opt->spec_path, "Hamiltonian spec JSON path")
      ->required();
  sim->add_option("--time", sim_opt->time, "final time")->required();
  sim->add_option("--state", state_values,
                  "initial coefficients 'a1,a2' or 're1,im1,re2,im2'")
      ->delimiter(',');
  sim->add_option("--points", sim_opt->points, "number of trajectory rows");
  sim->add_flag("--oracle", sim_opt->oracle,
                "add RK4 oracle columns and a deviation summary");
  sim->add_option("--steps", sim_opt->steps, "RK4 step count for --oracle");
  sim->add_option("--out", sim_opt->out_path,
                  "CSV output path (default stdout)");
  sim->callback([&, sim_opt] {
    if (!state_values.empty()) {
      sim_opt->state = parse_state(state_values);
    }
    action = [sim_opt] {
      return qsl::cli::run_simulate(*sim_opt, std::cout, std::cerr);
    };
  });

  // verify-bound
  auto* verify = app.add_subcommand(
      "verify-bound",
      "Stress-test the bound over an angle grid; exit 0 iff no violation");
  auto verify_opt = std::make_shared<qsl::cli::VerifyBoundOptions>();
  verify->add_option("--theta-grid", verify_opt->theta_grid,
                     "theta grid 'start:stop:step' or comma list");
  verify->add_option("--alpha-grid", verify_opt->alpha_grid,
                     "alpha grid 'start:stop:step' or comma list");
  verify->add_option("--epsilon", verify_opt->epsilon,
                     "fidelity tolerance in (0, 0.5)");
  verify->add_option("--budget", verify_opt->budget,
                     "random samples per grid point");
  verify->add_option("--refine", verify_opt->refine,
                     "coordinate-descent sweeps");
  verify->add_option("--seed", verify_opt->seed, "RNG seed")->required();
  verify->add_option("--out", verify_opt->out_path, "sweep CSV path")
      ->required();
  verify->callback([&, verify_opt] {
    action = [verify_opt] {
      return qsl::cli::run_verify_bound(*verify_opt, std::cout, std::cerr);
    };
  });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Append bound-search rows for theta and/or alpha grids");
  auto sweep_opt = std::make_shared<qsl::cli::VerifyBoundOptions>();
  sweep->add_option("--theta-grid", sweep_opt->theta_grid,
                    "theta grid 'start:stop:step' or comma list");
  sweep->add_option("--alpha-grid", sweep_opt->alpha_grid,
                    "alpha grid 'start:stop:step' or comma list");
  sweep->add_option("--epsilon", sweep_opt->epsilon,
                    "fidelity tolerance in (0, 0.5)");
  sweep->add_option("--budget", sweep_opt->budget,
                    "random samples per grid point");
  sweep->add_option("--refine", sweep_opt->refine,
                    "coordinate-descent sweeps");
  sweep->add_option("--seed", sweep_opt->seed, "RNG seed")->required();
  sweep->add_option("--out", sweep_opt->out_path,
                    "cumulative CSV path (appended)")
      ->required();
  sweep->callback([&, sweep_opt] {
    action = [sweep_opt] {
      return qsl::cli::run_sweep(*sweep_opt, std::cout, std::cerr);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qsl::cli::kExitUsage;
  }
  return action ? action() : qsl::cli::kExitUsage;
}
