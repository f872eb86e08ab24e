#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace spherefv {

// Error-free accumulation of doubles (Shewchuk's non-overlapping partials,
// as in Python's math.fsum). result() is the correctly rounded exact sum; in
// particular a list whose exact sum is zero yields exactly zero.
class ExactSum {
 public:
  ExactSum() { partials_.reserve(16); }

  void clear() { partials_.clear(); }

  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double result() const {
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the remaining partials push the
    // result across a rounding boundary.
    if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
      const double y = lo * 2;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

template <typename Range>
double exact_sum(const Range& values) {
  ExactSum acc;
  for (double v : values) acc.add(v);
  return acc.result();
}

}  // namespace spherefv
