#include "spherefv/driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "spherefv/csv.hpp"
#include "spherefv/errors.hpp"

namespace spherefv {

std::shared_ptr<const WebMesh> make_mesh(const Resolution& resolution, double merge_threshold) {
  const CoarseningRule rule = merge_threshold > 0 ? CoarseningRule{true, merge_threshold} : CoarseningRule::none();
  return std::make_shared<const WebMesh>(build_web_mesh(resolution.n_bands, resolution.n_lon_equator, rule));
}

std::shared_ptr<const WebMesh> make_mesh(const MeshConfig& config) {
  return make_mesh(Resolution{config.n_bands, config.n_lon_equator}, config.merge_threshold);
}

FluxField make_flux(const FluxConfig& config) {
  FluxField base = [&] {
    if (config.kind == "burgers") return burgers_flux(config.axis);
    if (config.kind == "trig") return trig_flux(config.axis);
    return linear_flux(config.axis);
  }();
  if (config.perturbation == 0) return base;
  // x ^ grad h plus a u-independent field with nonzero divergence.
  const double eps = config.perturbation;
  return FluxField::tangent_field([base, eps](const Vec3d& x, double u) -> Vec3d {
    return base.vector(x, u) + eps * (Vec3d::UnitZ() - x.z() * x);
  });
}

InitialData make_initial_data(const InitConfig& c) {
  if (c.kind == "constant") return constant_data(c.value);
  if (c.kind == "band_step") return band_step(c.lat_min, c.lat_max, c.inside, c.outside);
  const SpherePointd p1{c.center_lon, c.center_lat};
  if (c.kind == "two_bumps") {
    return two_bumps(p1, SpherePointd{c.center2_lon, c.center2_lat}, c.kappa, c.amplitude, c.background);
  }
  return gaussian_bump(p1, c.kappa, c.amplitude, c.background);
}

namespace {

bool all_finite(const Eigen::VectorXd& u) { return u.allFinite(); }

}  // namespace

Trajectory run(const RunConfig& config) {
  Trajectory out;
  const auto mesh = make_mesh(config.mesh);
  const TotalFluxScheme scheme(mesh, make_flux(config.flux), config.scheme);

  CellState state{mesh, cell_averages(*mesh, make_initial_data(config.init)), 0.0};
  const std::vector<double> constants = kruzkov_constants(state.u.minCoeff(), state.u.maxCoeff());
  out.states.push_back(state);
  out.diagnostics.records.push_back(diagnose(state, scheme));

  if (config.time.t_end == 0) return out;
  try {
    for (int k = 1; k <= config.time.n_outputs; ++k) {
      const double target = config.time.t_end * k / config.time.n_outputs;
      double residual = -std::numeric_limits<double>::infinity();
      while (state.t < target) {
        double dt = scheme.cfl_dt(state).dt;
        const bool last = state.t + dt >= target;
        if (last) dt = target - state.t;
        CellState next = scheme.step(state, dt);
        if (!all_finite(next.u)) throw Error("non-finite cell value at t = " + format_double(next.t));
        residual = std::max(residual,
                            max_entropy_residual(state, next, dt, scheme.numerical_flux(state), constants));
        if (last) next.t = target;
        state = std::move(next);
      }
      out.states.push_back(state);
      DiagnosticsRecord record = diagnose(state, scheme);
      record.entropy_residual_max = residual;
      out.diagnostics.records.push_back(record);
    }
  } catch (const std::exception& e) {
    out.complete = false;
    out.error = e.what();
  }
  return out;
}

std::vector<ConvergenceRow> converge(const RunConfig& config, const std::vector<Resolution>& resolutions) {
  if (config.flux.kind != "linear" && config.flux.kind != "custom-axis") {
    throw ConfigError("converge needs a linear flux (flux.kind = linear or custom-axis)");
  }
  if (config.flux.perturbation != 0) throw ConfigError("converge needs flux.perturbation = 0");
  const Vec3d axis = config.flux.axis.normalized();
  const InitialData data = make_initial_data(config.init);
  // h = u (c . x) moves data by x' = x ^ c, a rotation by -t about c.
  const InitialData exact = rotated(data, axis, -config.time.t_end);

  std::vector<ConvergenceRow> rows;
  for (const Resolution& res : resolutions) {
    RunConfig c = config;
    c.mesh.n_bands = res.n_bands;
    c.mesh.n_lon_equator = res.n_lon_equator;
    c.time.n_outputs = 1;
    const Trajectory t = run(c);
    if (!t.complete) throw Error(t.error);
    const auto& mesh = t.states.back().mesh;
    const CellState reference{mesh, cell_averages(*mesh, exact, 6), config.time.t_end};
    ConvergenceRow row{res, l1_distance(t.states.back(), reference), std::numeric_limits<double>::quiet_NaN()};
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.observed_order = std::log(prev.l1_error / row.l1_error) /
                           std::log(double(res.n_lon_equator) / prev.resolution.n_lon_equator);
    }
    rows.push_back(row);
  }
  return rows;
}

double overall_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return std::log(rows.front().l1_error / rows.back().l1_error) /
         std::log(double(rows.back().resolution.n_lon_equator) / rows.front().resolution.n_lon_equator);
}

torus::TorusProblem make_torus_problem(const TorusConfig& c) {
  torus::TorusProblem p;
  if (c.flux == "exp") {
    p.flux = torus::exponential();
  } else if (c.flux == "cubic") {
    p.flux = torus::cubic();
  } else {
    p.flux = torus::burgers();
  }
  if (c.omega == "sine") {
    p.omega = [](double x) { return 1 + 0.5 * std::sin(x); };
    p.unit_omega = false;
  }
  if (c.init == "constant") {
    const double v = c.value;
    p.u0 = [v](double) { return v; };
  } else if (c.init == "riemann") {
    p.u0 = [](double x) { return x > 0 && x < std::numbers::pi ? 1.0 : 0.0; };
    p.u0_breakpoints = {0.0, std::numbers::pi};
  } else {
    p.u0 = [](double x) { return std::sin(x); };
  }
  return p;
}

std::filesystem::path output_path(const RunConfig& config, const std::string& name) {
  return std::filesystem::path(config.output.directory) / (config.output.prefix + name);
}

void write_state_csv(std::ostream& out, const CellState& state) {
  out << "cell_id,lambda_center,phi_center,u\n";
  const WebMesh& mesh = *state.mesh;
  for (const Cell& c : mesh.cells) {
    out << c.id << ',' << format_double(c.lambda_center()) << ',' << format_double(c.phi_center()) << ','
        << format_double(state.u[c.id]) << '\n';
  }
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_run_outputs(const RunConfig& config, const Trajectory& trajectory) {
  std::filesystem::create_directories(config.output.directory);
  {
    auto out = open_output(output_path(config, "config.echo"));
    out << echo_config(config);
  }
  {
    auto out = open_output(output_path(config, "mesh.csv"));
    write_mesh_csv(out, *trajectory.states.front().mesh);
  }
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    auto out = open_output(output_path(config, "state_" + std::to_string(k) + ".csv"));
    write_state_csv(out, trajectory.states[k]);
  }
  {
    auto out = open_output(output_path(config, "diagnostics.csv"));
    trajectory.diagnostics.write_csv(out);
  }
  const auto marker = output_path(config, "INCOMPLETE");
  if (!trajectory.complete) {
    auto out = open_output(marker);
    out << trajectory.error << '\n';
  } else {
    std::filesystem::remove(marker);
  }
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "resolution,l1_error,observed_order\n";
  for (const ConvergenceRow& r : rows) {
    out << r.resolution.n_bands << 'x' << r.resolution.n_lon_equator << ',' << format_double(r.l1_error) << ','
        << (std::isnan(r.observed_order) ? std::string() : format_double(r.observed_order)) << '\n';
  }
}

void write_torus_profile_csv(std::ostream& out, const Eigen::VectorXd& x, const Eigen::VectorXd& exact,
                             const Eigen::VectorXd& numerical) {
  out << "x,u_exact,u_fv\n";
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    out << format_double(x[j]) << ',' << format_double(exact[j]) << ',' << format_double(numerical[j]) << '\n';
  }
}

}  // namespace spherefv
