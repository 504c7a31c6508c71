#include "fpp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fpp {

namespace {

// splitmix64 finalizer; decorrelates (seed, index) pairs.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

RngStream substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = mix64(mix64(seed) ^ mix64(index * 0xD1B54A32D192ED03ULL + 1));
    return RngStream(s);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return substream(seed ^ 0x5EEDFACEC0FFEE01ULL, index)();
}

double sample_standard_normal(RngStream& g) {
    // Marsaglia polar; the spare variate is discarded to keep draws stateless.
    for (;;) {
        double x = 2.0 * uniform_open(g) - 1.0;
        double y = 2.0 * uniform_open(g) - 1.0;
        double s = x * x + y * y;
        if (s > 0.0 && s < 1.0) {
            return x * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double sample_gamma(RngStream& g, double shape, double rate) {
    if (shape <= 0.0 || rate <= 0.0) {
        throw std::invalid_argument("sample_gamma: shape and rate must be positive");
    }
    if (shape < 1.0) {
        // Boost: Gamma(k) = Gamma(k+1) * U^{1/k}.
        double boost = std::pow(uniform_open(g), 1.0 / shape);
        return sample_gamma(g, shape + 1.0, rate) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_standard_normal(g);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = uniform_open(g);
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v / rate;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v / rate;
        }
    }
}

} // namespace fpp
