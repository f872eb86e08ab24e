#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

// Scalar conservation law on the circle T^1 = [0, 2 pi) with volume form
// omega(x) dx:
//
//   omega(x) d_t u + d_x f(u) = 0.
//
// In the coordinate xi(x) = int_0^x omega this is d_t u + d_xi f(u) = 0, so
// for strictly convex f the entropy solution is given by a Lax formula in xi:
//
//   u(t, x) = (f')^{-1}((xi(x) - eta*) / t),
//   eta* = argmin_eta [ W(eta) + t f*((xi(x) - eta) / t) ],
//
// with W the primitive of u0 in xi and f* the Legendre transform of f. With
// omega = 1 this is the classical Lax-Oleinik formula.

namespace spherefv::torus {

struct ConvexFlux {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  std::function<double(double)> df_inverse;
};

ConvexFlux burgers();      // u^2 / 2
ConvexFlux exponential();  // e^u
ConvexFlux cubic();        // u^3 / 3, not convex; rejected by validate()

struct TorusProblem {
  ConvexFlux flux;
  std::function<double(double)> omega = [](double) { return 1.0; };
  bool unit_omega = true;
  std::function<double(double)> u0;
  // Jump locations of u0 in [0, 2 pi), used to split quadratures.
  std::vector<double> u0_breakpoints;

  /// Checks f'' > 0 at 256 points of the data range and omega > 0 on a grid.
  /// Throws ConvexityViolation or InvalidRange.
  void validate() const;
  /// Range of u0 sampled on a fine grid (plus one-sided limits at jumps).
  std::pair<double, double> data_range() const;
};

// Primitive of a periodic density on [0, 2 pi), extended to the real line
// with P(x + 2 pi) = P(x) + total().
class PeriodicPrimitive {
 public:
  PeriodicPrimitive(std::function<double(double)> density, std::vector<double> breakpoints, int intervals = 4096);

  double operator()(double x) const;
  double total() const { return nodes_.back(); }
  /// Inverse for a positive density.
  double inverse(double value) const;

 private:
  double integrate(double a, double b) const;

  std::function<double(double)> density_;
  std::vector<double> breakpoints_;
  int intervals_;
  double h_;
  std::vector<double> nodes_;  // P at k h, k = 0..intervals
};

// Lax formula evaluator for one problem; precomputes the primitives.
class LaxSolution {
 public:
  explicit LaxSolution(TorusProblem problem);
  LaxSolution(const LaxSolution&) = delete;
  LaxSolution& operator=(const LaxSolution&) = delete;

  /// u(t, x), t > 0.
  double operator()(double t, double x) const;
  /// V(t, x) = min_eta [...]; d V / d xi = u, so V(b) - V(a) = int_a^b u omega dx.
  double value_function(double t, double x) const;
  /// Exact average of u(t) over [a, b] with respect to omega dx.
  double cell_average(double t, double a, double b) const;

  const TorusProblem& problem() const { return problem_; }

 private:
  struct Minimizer {
    double eta;
    double value;
  };
  Minimizer minimize(double t, double x) const;
  double xi(double x) const;
  double x_of_xi(double xi) const;
  double conjugate(double v) const;  // f*(v)

  TorusProblem problem_;
  PeriodicPrimitive xi_;
  PeriodicPrimitive mass_;  // W(x) = int_0^x u0 omega
  double slope_lo_;
  double slope_hi_;
};

/// Convenience wrapper; rebuilds the primitives on every call.
double lax_solution(const TorusProblem& problem, double t, double x);

// Godunov finite volume scheme on N uniform cells with measures omega_j dx.
class FvTorus {
 public:
  FvTorus(TorusProblem problem, int cells, double cfl = 0.9);

  int cells() const { return static_cast<int>(measure_.size()); }
  double dx() const { return dx_; }
  double cell_left(int j) const { return j * dx_; }
  const Eigen::VectorXd& measures() const { return measure_; }

  /// Exact cell averages of u0 with respect to omega.
  Eigen::VectorXd initial_state() const;
  /// cfl dx min(omega_j) / max |f'(u)| over the state.
  double stable_dt(const Eigen::VectorXd& u) const;
  /// One Godunov step; throws CflViolation when dt > stable_dt at cfl = 1.
  Eigen::VectorXd step(const Eigen::VectorXd& u, double dt) const;
  double mass(const Eigen::VectorXd& u) const;
  double l1_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::VectorXd run(Eigen::VectorXd u, double t_end) const;
  double godunov_flux(double a, double b) const;

 private:
  TorusProblem problem_;
  double dx_;
  double cfl_;
  Eigen::VectorXd measure_;
  double min_omega_;
};

Eigen::VectorXd fv1d_step(const FvTorus& scheme, const Eigen::VectorXd& u, double dt);

struct ErrorRow {
  int cells = 0;
  double l1_error = 0;
  double observed_order = 0;  // NaN for the first row
};

struct ComparisonResult {
  std::vector<ErrorRow> rows;
  // Per resolution: cell centres, exact averages, numerical averages.
  std::vector<Eigen::VectorXd> centers, exact, numerical;
};

/// L1_omega error of the Godunov scheme against the Lax formula at t_end.
ComparisonResult compare(const TorusProblem& problem, std::span<const int> resolutions, double t_end,
                         double cfl = 0.9);

void write_error_table(std::ostream& out, const std::vector<ErrorRow>& rows);

}  // namespace spherefv::torus
