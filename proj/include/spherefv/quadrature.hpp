#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace spherefv {

// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order) : nodes_(order), weights_(order) {
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 1;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = weights_[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
    }
  }

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return sum * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace spherefv
