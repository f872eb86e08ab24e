// sphere-fv: command line driver for the sphere and torus experiments.
//
//   sphere-fv run|converge|check-compat|torus --config PATH [--out DIR]
//
// Exit codes: 0 success, 1 compatibility check failed, 2 configuration
// error (nothing written), 3 runtime error (partial outputs flagged with an
// INCOMPLETE file).

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "spherefv/config.hpp"
#include "spherefv/csv.hpp"
#include "spherefv/driver.hpp"
#include "spherefv/errors.hpp"

using namespace spherefv;

namespace {

constexpr int kOk = 0;
constexpr int kCompatFailed = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

void mark_incomplete(const RunConfig& config, const std::string& message) {
  std::filesystem::create_directories(config.output.directory);
  std::ofstream(output_path(config, "INCOMPLETE")) << message << '\n';
}

void write_echo(const RunConfig& config) {
  std::filesystem::create_directories(config.output.directory);
  std::ofstream(output_path(config, "config.echo"), std::ios::binary) << echo_config(config);
}

int cmd_run(const RunConfig& config) {
  const Trajectory t = run(config);
  write_run_outputs(config, t);
  if (!t.complete) {
    std::cerr << "error: " << t.error << '\n';
    return kRuntimeError;
  }
  std::cout << "wrote " << t.states.size() << " states to " << config.output.directory << '\n';
  return kOk;
}

int cmd_converge(const RunConfig& config) {
  // Flux restrictions are configuration errors; check before writing anything.
  if (config.flux.kind != "linear" && config.flux.kind != "custom-axis") {
    throw ConfigError("converge needs flux.kind = linear or custom-axis");
  }
  if (config.flux.perturbation != 0) throw ConfigError("converge needs flux.perturbation = 0");
  std::vector<ConvergenceRow> rows;
  try {
    rows = converge(config, config.converge_resolutions);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    mark_incomplete(config, e.what());
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  write_echo(config);
  std::ofstream out(output_path(config, "convergence.csv"), std::ios::binary);
  write_convergence_csv(out, rows);
  write_convergence_csv(std::cout, rows);
  std::cout << "overall order " << format_double(overall_order(rows)) << '\n';
  return kOk;
}

int cmd_check_compat(const RunConfig& config) {
  const auto mesh = make_mesh(config.mesh);
  const FluxField flux = make_flux(config.flux);
  const Eigen::VectorXd u0 = cell_averages(*mesh, make_initial_data(config.init));
  const double lo = u0.minCoeff() - 1;
  const double hi = u0.maxCoeff() + 1;
  std::vector<double> samples(16);
  for (int i = 0; i < 16; ++i) samples[i] = lo + (hi - lo) * i / 15.0;
  const CompatibilityResult r = check_compatibility(flux, *mesh, samples);
  std::cout << "max_residual " << format_double(r.max_residual) << "\nworst_cell " << r.worst_cell
            << "\nworst_u " << format_double(r.worst_u) << '\n';
  const bool ok = r.max_residual <= 1e-10;
  std::cout << (ok ? "compatible" : "NOT compatible") << '\n';
  return ok ? kOk : kCompatFailed;
}

int cmd_torus(const RunConfig& config) {
  const torus::TorusProblem problem = make_torus_problem(config.torus);
  problem.validate();  // ConvexityViolation counts as a configuration error
  torus::ComparisonResult result;
  try {
    result = torus::compare(problem, config.torus.resolutions, config.torus.t_end, config.torus.cfl);
  } catch (const std::exception& e) {
    mark_incomplete(config, e.what());
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  write_echo(config);
  {
    std::ofstream out(output_path(config, "torus_errors.csv"), std::ios::binary);
    torus::write_error_table(out, result.rows);
  }
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    std::ofstream out(output_path(config, "torus_N" + std::to_string(result.rows[i].cells) + ".csv"),
                      std::ios::binary);
    write_torus_profile_csv(out, result.centers[i], result.exact[i], result.numerical[i]);
  }
  torus::write_error_table(std::cout, result.rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume schemes for scalar conservation laws on the sphere"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::string resolutions;
  std::vector<CLI::App*> commands;
  for (const char* name : {"run", "converge", "check-compat", "torus"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    if (std::string(name) == "converge") {
      sub->add_option("--resolutions", resolutions, "comma separated BANDSxLON list, e.g. 8x16,16x32");
    }
    commands.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
    if (!out_dir.empty()) config.output.directory = out_dir;
    if (!resolutions.empty()) config.converge_resolutions = parse_resolutions(resolutions);
    if (commands[0]->parsed()) return cmd_run(config);
    if (commands[1]->parsed()) return cmd_converge(config);
    if (commands[2]->parsed()) return cmd_check_compat(config);
    return cmd_torus(config);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvexityViolation& e) {
    std::cerr << "configuration error: ConvexityViolation: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
