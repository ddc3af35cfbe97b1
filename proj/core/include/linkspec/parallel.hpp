#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace linkspec {

// Worker count: LINKSPEC_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous chunks so the
// assignment of indices to threads never affects results written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

// Pairwise summation; order depends only on the input length.
double pairwise_sum(const double* values, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace linkspec
