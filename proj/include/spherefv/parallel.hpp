#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace spherefv {

/// Worker count from SPHEREFV_THREADS (default 1).
inline int thread_count() {
  static const int count = [] {
    const char* env = std::getenv("SPHEREFV_THREADS");
    if (env == nullptr) return 1;
    try {
      return std::clamp(std::stoi(env), 1, 256);
    } catch (...) {
      return 1;
    }
  }();
  return count;
}

/// Calls body(begin, end) on disjoint chunks covering [0, n).
template <typename Body>
void parallel_chunks(int n, Body&& body) {
  const int workers = std::min(thread_count(), std::max(1, n / 512));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace spherefv
