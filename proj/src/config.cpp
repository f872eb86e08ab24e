#include "spherefv/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "spherefv/csv.hpp"
#include "spherefv/mesh.hpp"

namespace spherefv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    const double v = parse_double(value);
    if (!std::isfinite(v)) throw ConfigError("");
    return v;
  } catch (const ConfigError&) {
    throw ConfigError(key + ": expected a finite number, got '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

std::string one_of(const std::string& key, const std::string& value, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (value == o) return value;
  }
  std::string msg = key + ": '" + value + "' is not one of";
  for (const char* o : options) msg += std::string(" ") + o;
  throw ConfigError(msg);
}

Vec3d to_vec3(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  std::string a, b, c, extra;
  if (!(in >> a >> b >> c) || (in >> extra)) throw ConfigError(key + ": expected three reals");
  return {to_double(key, a), to_double(key, b), to_double(key, c)};
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mesh.n_bands", [](RunConfig& c, const std::string& v) { c.mesh.n_bands = to_int("mesh.n_bands", v); }},
      {"mesh.n_lon_equator",
       [](RunConfig& c, const std::string& v) { c.mesh.n_lon_equator = to_int("mesh.n_lon_equator", v); }},
      {"mesh.merge_threshold",
       [](RunConfig& c, const std::string& v) { c.mesh.merge_threshold = to_double("mesh.merge_threshold", v); }},
      {"flux.kind",
       [](RunConfig& c, const std::string& v) {
         c.flux.kind = one_of("flux.kind", v, {"linear", "burgers", "trig", "custom-axis"});
       }},
      {"flux.axis",
       [](RunConfig& c, const std::string& v) {
         c.flux.axis = to_vec3("flux.axis", v);
         c.flux.axis_given = true;
       }},
      {"flux.perturbation",
       [](RunConfig& c, const std::string& v) { c.flux.perturbation = to_double("flux.perturbation", v); }},
      {"init.kind",
       [](RunConfig& c, const std::string& v) {
         c.init.kind = one_of("init.kind", v, {"constant", "gaussian_bump", "band_step", "two_bumps"});
       }},
      {"init.value", [](RunConfig& c, const std::string& v) { c.init.value = to_double("init.value", v); }},
      {"init.center_lon", [](RunConfig& c, const std::string& v) { c.init.center_lon = to_double("init.center_lon", v); }},
      {"init.center_lat", [](RunConfig& c, const std::string& v) { c.init.center_lat = to_double("init.center_lat", v); }},
      {"init.center2_lon",
       [](RunConfig& c, const std::string& v) { c.init.center2_lon = to_double("init.center2_lon", v); }},
      {"init.center2_lat",
       [](RunConfig& c, const std::string& v) { c.init.center2_lat = to_double("init.center2_lat", v); }},
      {"init.kappa", [](RunConfig& c, const std::string& v) { c.init.kappa = to_double("init.kappa", v); }},
      {"init.amplitude", [](RunConfig& c, const std::string& v) { c.init.amplitude = to_double("init.amplitude", v); }},
      {"init.background",
       [](RunConfig& c, const std::string& v) { c.init.background = to_double("init.background", v); }},
      {"init.lat_min", [](RunConfig& c, const std::string& v) { c.init.lat_min = to_double("init.lat_min", v); }},
      {"init.lat_max", [](RunConfig& c, const std::string& v) { c.init.lat_max = to_double("init.lat_max", v); }},
      {"init.inside", [](RunConfig& c, const std::string& v) { c.init.inside = to_double("init.inside", v); }},
      {"init.outside", [](RunConfig& c, const std::string& v) { c.init.outside = to_double("init.outside", v); }},
      {"scheme.numerical_flux",
       [](RunConfig& c, const std::string& v) {
         c.scheme.numerical_flux = one_of("scheme.numerical_flux", v, {"godunov", "lax_friedrichs"}) == "godunov"
                                       ? NumericalFluxKind::godunov
                                       : NumericalFluxKind::lax_friedrichs;
       }},
      {"scheme.order", [](RunConfig& c, const std::string& v) { c.scheme.order = to_int("scheme.order", v); }},
      {"scheme.cfl", [](RunConfig& c, const std::string& v) { c.scheme.cfl = to_double("scheme.cfl", v); }},
      {"scheme.limiter",
       [](RunConfig& c, const std::string& v) {
         one_of("scheme.limiter", v, {"minmod"});
         c.scheme.limiter = Limiter::minmod;
       }},
      {"time.t_end", [](RunConfig& c, const std::string& v) { c.time.t_end = to_double("time.t_end", v); }},
      {"time.n_outputs", [](RunConfig& c, const std::string& v) { c.time.n_outputs = to_int("time.n_outputs", v); }},
      {"output.directory", [](RunConfig& c, const std::string& v) { c.output.directory = v; }},
      {"output.prefix", [](RunConfig& c, const std::string& v) { c.output.prefix = v; }},
      {"torus.flux",
       [](RunConfig& c, const std::string& v) { c.torus.flux = one_of("torus.flux", v, {"burgers", "exp", "cubic"}); }},
      {"torus.init",
       [](RunConfig& c, const std::string& v) {
         c.torus.init = one_of("torus.init", v, {"sin", "riemann", "constant"});
       }},
      {"torus.value", [](RunConfig& c, const std::string& v) { c.torus.value = to_double("torus.value", v); }},
      {"torus.omega",
       [](RunConfig& c, const std::string& v) { c.torus.omega = one_of("torus.omega", v, {"one", "sine"}); }},
      {"torus.t_end", [](RunConfig& c, const std::string& v) { c.torus.t_end = to_double("torus.t_end", v); }},
      {"torus.resolutions",
       [](RunConfig& c, const std::string& v) { c.torus.resolutions = parse_int_list(v); }},
      {"torus.cfl", [](RunConfig& c, const std::string& v) { c.torus.cfl = to_double("torus.cfl", v); }},
      {"converge.resolutions",
       [](RunConfig& c, const std::string& v) { c.converge_resolutions = parse_resolutions(v); }},
  };
  return table;
}

std::set<std::string> init_keys_for(const std::string& kind) {
  if (kind == "constant") return {"init.value"};
  if (kind == "gaussian_bump") {
    return {"init.center_lon", "init.center_lat", "init.kappa", "init.amplitude", "init.background"};
  }
  if (kind == "band_step") return {"init.lat_min", "init.lat_max", "init.inside", "init.outside"};
  return {"init.center_lon", "init.center_lat", "init.center2_lon", "init.center2_lat",
          "init.kappa",      "init.amplitude",  "init.background"};
}

void validate(const RunConfig& c) {
  if (c.mesh.n_bands < 4 || c.mesh.n_bands % 2 != 0) throw ConfigError("mesh.n_bands must be even and >= 4");
  if (c.mesh.n_lon_equator < 4) throw ConfigError("mesh.n_lon_equator must be >= 4");
  if (!(c.mesh.merge_threshold >= 0 && c.mesh.merge_threshold < 1)) {
    throw ConfigError("mesh.merge_threshold must lie in [0, 1)");
  }
  try {
    CoarseningRule rule{c.mesh.merge_threshold > 0, c.mesh.merge_threshold > 0 ? c.mesh.merge_threshold : 0.5};
    (void)build_web_mesh(c.mesh.n_bands, c.mesh.n_lon_equator, rule);
  } catch (const InvalidResolution& e) {
    throw ConfigError(std::string("mesh: ") + e.what());
  }
  if (!(c.flux.axis.norm() > 0)) throw ConfigError("flux.axis must be nonzero");
  if (c.flux.kind == "custom-axis" && !c.flux.axis_given) throw ConfigError("flux.kind = custom-axis needs flux.axis");
  if (c.init.kind != "constant" && c.init.kind != "band_step" && !(c.init.kappa > 0)) {
    throw ConfigError("init.kappa must be positive");
  }
  if (c.init.kind == "band_step" && !(c.init.lat_min < c.init.lat_max)) {
    throw ConfigError("init.lat_min must be below init.lat_max");
  }
  try {
    c.scheme.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("scheme: ") + e.what());
  }
  if (!(c.time.t_end >= 0)) throw ConfigError("time.t_end must be >= 0");
  if (c.time.n_outputs < 1) throw ConfigError("time.n_outputs must be >= 1");
  if (c.output.directory.empty()) throw ConfigError("output.directory must not be empty");
  if (c.output.prefix.find('/') != std::string::npos) throw ConfigError("output.prefix must not contain '/'");
  if (!(c.torus.t_end > 0)) throw ConfigError("torus.t_end must be > 0");
  if (!(c.torus.cfl > 0 && c.torus.cfl <= 1)) throw ConfigError("torus.cfl must lie in (0, 1]");
  if (c.torus.resolutions.empty()) throw ConfigError("torus.resolutions must not be empty");
  for (std::size_t i = 0; i < c.torus.resolutions.size(); ++i) {
    if (c.torus.resolutions[i] < 2 || (i > 0 && c.torus.resolutions[i] <= c.torus.resolutions[i - 1])) {
      throw ConfigError("torus.resolutions must be increasing and >= 2");
    }
  }
  if (c.converge_resolutions.empty()) throw ConfigError("converge.resolutions must not be empty");
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_int("list", trim(item)));
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

std::vector<Resolution> parse_resolutions(const std::string& text) {
  std::vector<Resolution> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    const auto x = item.find('x');
    if (x == std::string::npos) throw ConfigError("resolution '" + item + "' is not of the form BANDSxLON");
    out.push_back({to_int("resolution", item.substr(0, x)), to_int("resolution", item.substr(x + 1))});
    if (out.back().n_bands < 4 || out.back().n_lon_equator < 4) throw ConfigError("resolution too small: " + item);
  }
  if (out.empty()) throw ConfigError("empty resolution list");
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> seen;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
    if (!seen.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
    it->second(config, value);
  }
  const std::set<std::string> allowed = init_keys_for(config.init.kind);
  for (const auto& [key, value] : seen) {
    if (key.rfind("init.", 0) == 0 && key != "init.kind" && !allowed.count(key)) {
      throw ConfigError("key '" + key + "' does not apply to init.kind = " + config.init.kind);
    }
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream out;
  auto line = [&](const std::string& key, const std::string& value) { out << key << " = " << value << '\n'; };
  auto num = [](double v) { return format_double(v); };
  line("mesh.n_bands", std::to_string(c.mesh.n_bands));
  line("mesh.n_lon_equator", std::to_string(c.mesh.n_lon_equator));
  line("mesh.merge_threshold", num(c.mesh.merge_threshold));
  line("flux.kind", c.flux.kind);
  line("flux.axis", num(c.flux.axis(0)) + " " + num(c.flux.axis(1)) + " " + num(c.flux.axis(2)));
  line("flux.perturbation", num(c.flux.perturbation));
  line("init.kind", c.init.kind);
  const std::map<std::string, double> init_values = {
      {"init.value", c.init.value},         {"init.center_lon", c.init.center_lon},
      {"init.center_lat", c.init.center_lat}, {"init.center2_lon", c.init.center2_lon},
      {"init.center2_lat", c.init.center2_lat}, {"init.kappa", c.init.kappa},
      {"init.amplitude", c.init.amplitude}, {"init.background", c.init.background},
      {"init.lat_min", c.init.lat_min},     {"init.lat_max", c.init.lat_max},
      {"init.inside", c.init.inside},       {"init.outside", c.init.outside}};
  for (const std::string& key : init_keys_for(c.init.kind)) line(key, num(init_values.at(key)));
  line("scheme.numerical_flux",
       c.scheme.numerical_flux == NumericalFluxKind::godunov ? "godunov" : "lax_friedrichs");
  line("scheme.order", std::to_string(c.scheme.order));
  line("scheme.cfl", num(c.scheme.cfl));
  line("scheme.limiter", "minmod");
  line("time.t_end", num(c.time.t_end));
  line("time.n_outputs", std::to_string(c.time.n_outputs));
  line("output.directory", c.output.directory);
  line("output.prefix", c.output.prefix);
  line("torus.flux", c.torus.flux);
  line("torus.init", c.torus.init);
  line("torus.value", num(c.torus.value));
  line("torus.omega", c.torus.omega);
  line("torus.t_end", num(c.torus.t_end));
  std::string res;
  for (std::size_t i = 0; i < c.torus.resolutions.size(); ++i) {
    res += (i ? "," : "") + std::to_string(c.torus.resolutions[i]);
  }
  line("torus.resolutions", res);
  line("torus.cfl", num(c.torus.cfl));
  res.clear();
  for (std::size_t i = 0; i < c.converge_resolutions.size(); ++i) {
    res += (i ? "," : "") + std::to_string(c.converge_resolutions[i].n_bands) + "x" +
           std::to_string(c.converge_resolutions[i].n_lon_equator);
  }
  line("converge.resolutions", res);
  return out.str();
}

}  // namespace spherefv
