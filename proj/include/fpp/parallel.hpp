#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace fpp {

// FPP_THREADS environment variable, else hardware concurrency, at least 1.
int default_thread_count();

// Runs body(begin, end) over a static block partition of [0, n). Callers
// write results into per-index slots, so the partition never affects output.
void parallel_for(std::uint64_t n, int n_threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body);

// Fixed-shape pairwise summation: identical result for any thread count.
double pairwise_sum(std::span<const double> v);

// Mean and standard error of the mean via pairwise sums.
void mean_and_std_error(std::span<const double> v, double& mean, double& se);

} // namespace fpp
