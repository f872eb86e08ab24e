#include "spherefv/torus1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "spherefv/csv.hpp"
#include "spherefv/errors.hpp"
#include "spherefv/numerical_flux.hpp"
#include "spherefv/quadrature.hpp"

namespace spherefv::torus {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;
constexpr int kCandidates = 4096;

const GaussLegendre& rule8() {
  static const GaussLegendre rule(8);
  return rule;
}

}  // namespace

ConvexFlux burgers() {
  return {"burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
          [](double) { return 1.0; }, [](double v) { return v; }};
}

ConvexFlux exponential() {
  return {"exp", [](double u) { return std::exp(u); }, [](double u) { return std::exp(u); },
          [](double u) { return std::exp(u); }, [](double v) { return std::log(v); }};
}

ConvexFlux cubic() {
  return {"cubic", [](double u) { return u * u * u / 3; }, [](double u) { return u * u; },
          [](double u) { return 2 * u; }, [](double v) { return std::sqrt(v); }};
}

std::pair<double, double> TorusProblem::data_range() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto take = [&](double x) {
    const double v = u0(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  constexpr int samples = 8192;
  for (int i = 0; i < samples; ++i) take(two_pi * i / samples);
  for (double b : u0_breakpoints) {
    take(std::nextafter(b, -1.0) >= 0 ? std::nextafter(b, -1.0) : b + two_pi * (1 - 1e-15));
    take(std::nextafter(b, 10.0));
  }
  return {lo, hi};
}

void TorusProblem::validate() const {
  if (!flux.f || !flux.df || !flux.d2f || !flux.df_inverse) throw InvalidRange("torus flux is incomplete");
  if (!u0) throw InvalidRange("torus problem has no initial data");
  auto [lo, hi] = data_range();
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidRange("initial data is not finite");
  if (lo == hi) {
    lo -= 1;
    hi += 1;
  }
  constexpr int samples = 256;
  for (int i = 0; i < samples; ++i) {
    const double u = lo + (hi - lo) * i / (samples - 1);
    if (!(flux.d2f(u) > 0)) {
      std::ostringstream msg;
      msg << "flux '" << flux.name << "' is not strictly convex: f''(" << u << ") = " << flux.d2f(u);
      throw ConvexityViolation(msg.str());
    }
  }
  for (int i = 0; i < 4096; ++i) {
    const double w = omega(two_pi * i / 4096);
    if (!(w > 0) || !std::isfinite(w)) throw InvalidRange("volume form weight must be positive and bounded");
  }
}

PeriodicPrimitive::PeriodicPrimitive(std::function<double(double)> density, std::vector<double> breakpoints,
                                     int intervals)
    : density_(std::move(density)),
      breakpoints_(std::move(breakpoints)),
      intervals_(intervals),
      h_(two_pi / intervals),
      nodes_(intervals + 1, 0.0) {
  std::sort(breakpoints_.begin(), breakpoints_.end());
  for (int k = 0; k < intervals_; ++k) nodes_[k + 1] = nodes_[k] + integrate(k * h_, (k + 1) * h_);
}

double PeriodicPrimitive::integrate(double a, double b) const {
  double sum = 0;
  double left = a;
  for (double bp : breakpoints_) {
    if (bp > left && bp < b) {
      sum += rule8().integrate(density_, left, bp);
      left = bp;
    }
  }
  return sum + rule8().integrate(density_, left, b);
}

double PeriodicPrimitive::operator()(double x) const {
  const double periods = std::floor(x / two_pi);
  double r = x - periods * two_pi;
  if (r >= two_pi) r = 0;  // rounding
  int k = static_cast<int>(r / h_);
  k = std::clamp(k, 0, intervals_ - 1);
  return periods * total() + nodes_[k] + (r > k * h_ ? integrate(k * h_, r) : -integrate(r, k * h_));
}

double PeriodicPrimitive::inverse(double value) const {
  const double periods = std::floor(value / total());
  const double rem = value - periods * total();
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), rem);
  int k = std::clamp(static_cast<int>(it - nodes_.begin()) - 1, 0, intervals_ - 1);
  double lo = k * h_, hi = (k + 1) * h_;
  double x = lo + h_ * (rem - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
  for (int iter = 0; iter < 20; ++iter) {
    const double residual = nodes_[k] + integrate(k * h_, x) - rem;
    const double next = std::clamp(x - residual / density_(x), lo, hi);
    if (std::abs(next - x) < 1e-15) {
      x = next;
      break;
    }
    x = next;
  }
  return periods * two_pi + x;
}

LaxSolution::LaxSolution(TorusProblem problem)
    : problem_(std::move(problem)),
      xi_(problem_.omega, {}, problem_.unit_omega ? 1 : 4096),
      mass_([this](double x) { return problem_.u0(x) * problem_.omega(x); }, problem_.u0_breakpoints) {
  problem_.validate();
  const auto [lo, hi] = problem_.data_range();
  slope_lo_ = problem_.flux.df(lo);
  slope_hi_ = problem_.flux.df(hi);
}

double LaxSolution::xi(double x) const { return problem_.unit_omega ? x : xi_(x); }

double LaxSolution::x_of_xi(double value) const { return problem_.unit_omega ? value : xi_.inverse(value); }

double LaxSolution::conjugate(double v) const {
  const double w = problem_.flux.df_inverse(v);
  return v * w - problem_.flux.f(w);
}

LaxSolution::Minimizer LaxSolution::minimize(double t, double x) const {
  if (!(t > 0)) throw InvalidRange("the Lax formula needs t > 0");
  const double X = xi(x);
  auto G = [&](double eta) { return mass_(x_of_xi(eta)) + t * conjugate((X - eta) / t); };
  const double eta_lo = X - t * slope_hi_;
  const double eta_hi = X - t * slope_lo_;
  if (!(eta_hi > eta_lo)) return {eta_lo, G(eta_lo)};

  std::vector<double> grid(kCandidates);
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCandidates; ++i) {
    grid[i] = i == kCandidates - 1 ? eta_hi : eta_lo + (eta_hi - eta_lo) * i / (kCandidates - 1);
    const double g = G(grid[i]);
    if (g < best_value) {
      best_value = g;
      best = i;
    }
  }

  // dG/deta = u0(y(eta)) - (f')^{-1}((X - eta) / t); its sign change brackets
  // the minimizer even when u0 jumps there.
  auto dG = [&](double eta) {
    const double v = std::clamp((X - eta) / t, slope_lo_, slope_hi_);
    return problem_.u0(x_of_xi(eta)) - problem_.flux.df_inverse(v);
  };
  const double a = grid[std::max(best - 1, 0)];
  const double b = grid[std::min(best + 1, kCandidates - 1)];
  Minimizer result{grid[best], best_value};
  if (dG(a) < 0 && dG(b) > 0) {
    auto [left, right] =
        boost::math::tools::bisect(dG, a, b, boost::math::tools::eps_tolerance<double>(50));
    const double eta = 0.5 * (left + right);
    const double g = G(eta);
    if (g <= result.value) result = {eta, g};
  }
  return result;
}

double LaxSolution::operator()(double t, double x) const {
  const Minimizer m = minimize(t, x);
  const double v = std::clamp((xi(x) - m.eta) / t, slope_lo_, slope_hi_);
  return problem_.flux.df_inverse(v);
}

double LaxSolution::value_function(double t, double x) const { return minimize(t, x).value; }

double LaxSolution::cell_average(double t, double a, double b) const {
  if (t == 0) return (mass_(b) - mass_(a)) / (xi(b) - xi(a));
  return (value_function(t, b) - value_function(t, a)) / (xi(b) - xi(a));
}

double lax_solution(const TorusProblem& problem, double t, double x) {
  return LaxSolution(problem)(t, x);
}

FvTorus::FvTorus(TorusProblem problem, int cells, double cfl)
    : problem_(std::move(problem)), dx_(two_pi / cells), cfl_(cfl), measure_(cells) {
  if (cells < 2) throw InvalidRange("the torus scheme needs at least two cells");
  if (!(cfl > 0 && cfl <= 1)) throw InvalidRange("cfl must lie in (0, 1]");
  if (problem_.unit_omega) {
    measure_.setConstant(dx_);
  } else {
    const PeriodicPrimitive xi(problem_.omega, {}, cells * 4);
    for (int j = 0; j < cells; ++j) measure_[j] = xi((j + 1) * dx_) - xi(j * dx_);
  }
  min_omega_ = measure_.minCoeff() / dx_;
}

Eigen::VectorXd FvTorus::initial_state() const {
  const PeriodicPrimitive mass([this](double x) { return problem_.u0(x) * problem_.omega(x); },
                               problem_.u0_breakpoints, std::max(cells(), 64));
  Eigen::VectorXd u(cells());
  for (int j = 0; j < cells(); ++j) u[j] = (mass((j + 1) * dx_) - mass(j * dx_)) / measure_[j];
  return u;
}

double FvTorus::godunov_flux(double a, double b) const {
  const ScalarFunction g{problem_.flux.f, problem_.flux.df};
  if (a == b) return g.value(a);
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> critical;
  if (problem_.flux.df(lo) < 0 && problem_.flux.df(hi) > 0) critical.push_back(problem_.flux.df_inverse(0.0));
  return g.value(godunov_argument(g, a, b, critical));
}

double FvTorus::stable_dt(const Eigen::VectorXd& u) const {
  double speed = 0;
  for (int j = 0; j < u.size(); ++j) speed = std::max(speed, std::abs(problem_.flux.df(u[j])));
  if (speed == 0) return std::numeric_limits<double>::infinity();
  return cfl_ * dx_ * min_omega_ / speed;
}

Eigen::VectorXd FvTorus::step(const Eigen::VectorXd& u, double dt) const {
  const double limit = stable_dt(u) / cfl_;
  if (!(dt >= 0) || dt > limit * (1 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " violates the CFL limit " << limit;
    throw CflViolation(msg.str());
  }
  const int n = cells();
  Eigen::VectorXd q(n);  // q[j] at the right face of cell j
  for (int j = 0; j < n; ++j) q[j] = godunov_flux(u[j], u[(j + 1) % n]);
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) out[j] = u[j] - dt * (q[j] - q[(j + n - 1) % n]) / measure_[j];
  return out;
}

double FvTorus::mass(const Eigen::VectorXd& u) const { return measure_.dot(u); }

double FvTorus::l1_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return measure_.dot((a - b).cwiseAbs());
}

Eigen::VectorXd FvTorus::run(Eigen::VectorXd u, double t_end) const {
  double t = 0;
  while (t < t_end) {
    double dt = stable_dt(u);
    if (t + dt >= t_end) dt = t_end - t;
    u = step(u, dt);
    t = (dt == t_end - t) ? t_end : t + dt;
  }
  return u;
}

Eigen::VectorXd fv1d_step(const FvTorus& scheme, const Eigen::VectorXd& u, double dt) {
  return scheme.step(u, dt);
}

ComparisonResult compare(const TorusProblem& problem, std::span<const int> resolutions, double t_end,
                         double cfl) {
  const LaxSolution exact(problem);
  ComparisonResult result;
  for (int n : resolutions) {
    const FvTorus scheme(problem, n, cfl);
    const Eigen::VectorXd u = scheme.run(scheme.initial_state(), t_end);
    Eigen::VectorXd reference(n), centers(n);
    if (t_end == 0) {
      reference = scheme.initial_state();
    } else {
      std::vector<double> V(n + 1);
      for (int j = 0; j <= n; ++j) V[j] = exact.value_function(t_end, j * scheme.dx());
      for (int j = 0; j < n; ++j) reference[j] = (V[j + 1] - V[j]) / scheme.measures()[j];
    }
    for (int j = 0; j < n; ++j) centers[j] = (j + 0.5) * scheme.dx();
    ErrorRow row;
    row.cells = n;
    row.l1_error = scheme.l1_distance(u, reference);
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (!result.rows.empty()) {
      const ErrorRow& prev = result.rows.back();
      row.observed_order = std::log(prev.l1_error / row.l1_error) / std::log(static_cast<double>(n) / prev.cells);
    }
    result.rows.push_back(row);
    result.centers.push_back(centers);
    result.exact.push_back(reference);
    result.numerical.push_back(u);
  }
  return result;
}

void write_error_table(std::ostream& out, const std::vector<ErrorRow>& rows) {
  out << "N,l1_error,observed_order\n";
  for (const ErrorRow& r : rows) {
    out << r.cells << ',' << format_double(r.l1_error) << ','
        << (std::isnan(r.observed_order) ? std::string() : format_double(r.observed_order)) << '\n';
  }
}

}  // namespace spherefv::torus
