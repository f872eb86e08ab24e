#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "spherefv/config.hpp"
#include "spherefv/diagnostics.hpp"
#include "spherefv/flux.hpp"
#include "spherefv/initial_data.hpp"
#include "spherefv/mesh.hpp"
#include "spherefv/scheme.hpp"
#include "spherefv/torus1d.hpp"

// Experiment plumbing shared by the command line tool and the tests.

namespace spherefv {

std::shared_ptr<const WebMesh> make_mesh(const MeshConfig& config);
std::shared_ptr<const WebMesh> make_mesh(const Resolution& resolution, double merge_threshold);
FluxField make_flux(const FluxConfig& config);
InitialData make_initial_data(const InitConfig& config);

struct Trajectory {
  std::vector<CellState> states;  // one per output time, starting at t = 0
  DiagnosticsReport diagnostics;
  bool complete = true;
  std::string error;
};

/// Output times t_end * k / n_outputs are hit exactly. Runtime errors end the
/// run early with complete = false and the states computed so far.
Trajectory run(const RunConfig& config);

struct ConvergenceRow {
  Resolution resolution;
  double l1_error = 0;
  double observed_order = 0;  // NaN for the first row
};

/// Solid-body rotation against the exactly rotated initial data at time.t_end.
/// Needs a linear flux; throws ConfigError otherwise.
std::vector<ConvergenceRow> converge(const RunConfig& config, const std::vector<Resolution>& resolutions);

/// log(e_first / e_last) / log(n_last / n_first) in the equatorial cell count.
double overall_order(const std::vector<ConvergenceRow>& rows);

torus::TorusProblem make_torus_problem(const TorusConfig& config);

// Output files, all under config.output.directory with config.output.prefix.
std::filesystem::path output_path(const RunConfig& config, const std::string& name);
void write_state_csv(std::ostream& out, const CellState& state);
void write_run_outputs(const RunConfig& config, const Trajectory& trajectory);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_torus_profile_csv(std::ostream& out, const Eigen::VectorXd& x, const Eigen::VectorXd& exact,
                             const Eigen::VectorXd& numerical);

}  // namespace spherefv
