#pragma once

#include <map>
#include <string>
#include <vector>

#include "spherefv/geometry.hpp"
#include "spherefv/scheme.hpp"

// Experiment configuration: flat "section.key = value" text, '#' comments.
// Unknown keys are rejected; every value is range-checked before anything
// is computed.

namespace spherefv {

struct MeshConfig {
  int n_bands = 16;
  int n_lon_equator = 32;
  double merge_threshold = 0.5;  // 0 disables merging
};

struct FluxConfig {
  std::string kind = "linear";  // linear | burgers | trig | custom-axis
  Vec3d axis = Vec3d::UnitZ();
  bool axis_given = false;
  // Amplitude of a non-solenoidal tangent field added for check-compat.
  double perturbation = 0;
};

struct InitConfig {
  std::string kind = "gaussian_bump";  // constant | gaussian_bump | band_step | two_bumps
  double value = 1;
  double center_lon = 0;
  double center_lat = 0;
  double center2_lon = 3.141592653589793 / 2;
  double center2_lat = 0;
  double kappa = 4;
  double amplitude = 1;
  double background = 0;
  double lat_min = -0.5;
  double lat_max = 0.5;
  double inside = 1;
  double outside = 0;
};

struct TimeConfig {
  double t_end = 1;
  int n_outputs = 4;
};

struct OutputConfig {
  std::string directory = "out";
  std::string prefix;
};

struct TorusConfig {
  std::string flux = "burgers";  // burgers | exp | cubic
  std::string init = "sin";      // sin | riemann | constant
  double value = 1;
  std::string omega = "one";  // one | sine (1 + 0.5 sin x)
  double t_end = 0.5;
  std::vector<int> resolutions{64, 128, 256, 512};
  double cfl = 0.9;
};

struct Resolution {
  int n_bands = 0;
  int n_lon_equator = 0;
};

struct RunConfig {
  MeshConfig mesh;
  FluxConfig flux;
  InitConfig init;
  SchemeConfig scheme;
  TimeConfig time;
  OutputConfig output;
  TorusConfig torus;
  std::vector<Resolution> converge_resolutions{{8, 16}, {16, 32}, {32, 64}, {64, 128}};
};

/// Parses and validates. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Effective configuration in the input format; parse_config(echo(c)) == c.
std::string echo_config(const RunConfig& config);

std::vector<Resolution> parse_resolutions(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace spherefv
