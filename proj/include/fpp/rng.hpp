#pragma once

#include <cstdint>
#include <random>

namespace fpp {

using RngStream = std::mt19937_64;

// Independent stream for replication `index` of a run keyed by `seed`.
// Depends only on (seed, index), never on execution order or thread count.
RngStream substream(std::uint64_t seed, std::uint64_t index);

// Fresh 64-bit seed for sub-run `index` of a run keyed by `seed` (e.g. one
// seed per grid point, each then driving its own replication substreams).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Uniform on the open interval (0,1): 53 random bits offset by half an ulp,
// so 0 and 1 are unreachable.
inline double uniform_open(RngStream& g) {
    return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

inline double sample_exponential(RngStream& g, double rate = 1.0) {
    return -std::log(uniform_open(g)) / rate;
}

double sample_standard_normal(RngStream& g);

// Gamma(shape k > 0, rate): Marsaglia-Tsang squeeze for k >= 1, with the
// power-of-uniform boost for k < 1.
double sample_gamma(RngStream& g, double shape, double rate);

} // namespace fpp
