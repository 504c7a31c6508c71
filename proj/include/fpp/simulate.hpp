#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fpp/laws.hpp"
#include "fpp/rng.hpp"

namespace fpp {

// Point estimate with its standard error; reproducible from (seed, n_rep).
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_rep = 0;
    std::uint64_t seed = 0;
};

struct RenewalPath {
    FracParams params;
    double horizon;
    std::vector<double> arrivals;  // strictly increasing, all <= horizon

    std::int64_t count() const { return static_cast<std::int64_t>(arrivals.size()); }
};

// Number of renewals in [0, t]: draws holding times until the partial sum
// exceeds t. Expected cost O(E[M(t)] + 1) draws.
std::int64_t simulate_count(const FracParams& p, double t, RngStream& g);

RenewalPath simulate_path(const FracParams& p, double t, RngStream& g);

// One cell of a decay profile -(1/t) log P(X_t/t >= x).
struct ProfilePoint {
    double t;
    double value;
    double std_error;  // delta-method; 0 for exact or bound rows
    bool is_bound;     // no hits: value is the rule-of-three one-sided bound
};

// Every profile cell had zero hits.
class InsufficientReplicationsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monte Carlo profile of -(1/t) log P(M(t)/t >= x) over a t-grid.
// Replication i of cell c uses substream(seed, c * n_rep + i); zero-hit
// cells report the rule-of-three bound instead of a point estimate.
std::vector<ProfilePoint> ldp_profile_renewal(const FracParams& p, double x,
                                              std::span<const double> t_grid,
                                              std::uint64_t n_rep,
                                              std::uint64_t seed,
                                              int n_threads = 0);

// Exact profile of -(1/t) log P(A(t)/t >= x) via the weighted-Poisson tail;
// no Monte Carlo noise.
std::vector<ProfilePoint> ldp_profile_weighted(double nu, double lambda,
                                               double x,
                                               std::span<const double> t_grid);

// P(N_lambda(|B(2t)|) = k): Poisson(lambda y) pmf integrated against the
// half-normal density with variance 2t, by adaptive Gauss-Kronrod quadrature
// to 1e-10 absolute. Valid at any fixed t; this is a one-dimensional
// distribution identity only, not a path representation.
double subordinated_pmf(double lambda, double t, std::int64_t k);

} // namespace fpp
