#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "spherefv/errors.hpp"

// Two-point monotone numerical fluxes for a scalar total-flux function g.

namespace spherefv {

template <typename G>
concept ScalarValued = requires(const G& g, double u) {
  { g.value(u) } -> std::convertible_to<double>;
};

template <typename G>
concept ScalarDifferentiable = ScalarValued<G> && requires(const G& g, double u) {
  { g.derivative(u) } -> std::convertible_to<double>;
};

// Adapter for plain callables.
struct ScalarFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;

  double value(double u) const { return f(u); }
  double derivative(double u) const { return df(u); }
};

namespace detail {

// +1 selects the minimum (a <= b), -1 the maximum.
inline int godunov_sense(double a, double b) { return a <= b ? 1 : -1; }

}  // namespace detail

/// Argument w* of the Godunov flux: argmin of g on [a, b] when a <= b,
/// argmax on [b, a] otherwise. Dense sampling (129 points) followed by Brent
/// refinement around the best sample. Ties go to the first sample.
template <ScalarValued G>
double godunov_argument(const G& g, double a, double b) {
  if (a == b) return a;
  const int sense = detail::godunov_sense(a, b);
  const double lo = std::min(a, b), hi = std::max(a, b);
  auto objective = [&](double w) { return sense * g.value(w); };

  constexpr int samples = 129;
  int best = 0;
  double best_value = objective(lo);
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i) {
    grid[i] = i == samples - 1 ? hi : lo + (hi - lo) * (static_cast<double>(i) / (samples - 1));
    const double v = i == 0 ? best_value : objective(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double arg = grid[best];
  // An extremum next to an end sample still needs refining, so the bracket
  // is clamped rather than skipped. 40 bits of relative precision puts w*
  // within ~1e-12 for |w| = O(1).
  const int left = std::max(best - 1, 0), right = std::min(best + 1, samples - 1);
  auto [w, v] = boost::math::tools::brent_find_minima(objective, grid[left], grid[right], 40);
  if (v < best_value) arg = w;
  return arg;
}

/// Godunov argument when the interior critical points of g are known.
template <ScalarValued G>
double godunov_argument(const G& g, double a, double b, std::span<const double> critical_points) {
  if (a == b) return a;
  const int sense = detail::godunov_sense(a, b);
  const double lo = std::min(a, b), hi = std::max(a, b);
  double arg = lo;
  double best = sense * g.value(lo);
  for (double c : critical_points) {
    if (c > lo && c < hi) {
      const double v = sense * g.value(c);
      if (v < best) {
        best = v;
        arg = c;
      }
    }
  }
  if (sense * g.value(hi) < best) arg = hi;
  return arg;
}

template <ScalarValued G>
double godunov_numflux(const G& g, double a, double b) {
  if (a == b) return g.value(a);
  return g.value(godunov_argument(g, a, b));
}

/// Lax-Friedrichs flux. Throws SpeedTooSmall when speed is below |g'| at a
/// few points of [min(a,b), max(a,b)].
template <ScalarDifferentiable G>
double lax_friedrichs_numflux(const G& g, double a, double b, double speed) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  for (int i = 0; i <= 4; ++i) {
    const double w = lo + (hi - lo) * (i / 4.0);
    const double slope = std::abs(g.derivative(w));
    if (speed < slope * (1 - 1e-12)) throw SpeedTooSmall("Lax-Friedrichs speed below |g'|");
  }
  return 0.5 * (g.value(a) + g.value(b)) - 0.5 * speed * (b - a);
}

}  // namespace spherefv
