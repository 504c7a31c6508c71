#include "fpp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fpp {

int default_thread_count() {
    if (const char* env = std::getenv("FPP_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::uint64_t n, int n_threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body) {
    if (n_threads <= 0) n_threads = default_thread_count();
    if (n_threads == 1 || n < 2048) {
        body(0, n);
        return;
    }
    std::uint64_t workers = std::min<std::uint64_t>(n_threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        std::uint64_t begin = w * chunk;
        std::uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> v) {
    return pairwise_sum_impl(v.data(), v.size());
}

void mean_and_std_error(std::span<const double> v, double& mean, double& se) {
    const std::size_t n = v.size();
    if (n == 0) {
        mean = 0.0;
        se = 0.0;
        return;
    }
    mean = pairwise_sum(v) / static_cast<double>(n);
    if (n == 1) {
        se = 0.0;
        return;
    }
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = v[i] - mean;
        sq[i] = d * d;
    }
    double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    se = std::sqrt(var / static_cast<double>(n));
}

} // namespace fpp
