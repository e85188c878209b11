#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace qpend {

// Fixed 17-significant-digit formatting used by every emitter, so identical
// runs produce byte-identical files.
inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Rows write into
// disjoint slots, so the result is deterministic regardless of the count.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = 1;
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline unsigned default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Chebyshev-spaced points on [a, b] (endpoints excluded by construction).
inline std::vector<double> chebyshev_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n));
    g[i] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return g;
}

}  // namespace qpend
