#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpp/extended_real.hpp"
#include "fpp/laws.hpp"
#include "fpp/rng.hpp"
#include "fpp/simulate.hpp"

namespace fpp {

// Light-tailed claim-size law with a closed-form exponential tilt.
class ClaimLaw {
public:
    enum class Kind { exponential, gamma, deterministic };

    static ClaimLaw exponential(double mu);           // rate mu
    static ClaimLaw gamma(double shape, double rate);
    static ClaimLaw deterministic(double m);

    Kind kind() const { return kind_; }

    // log E[e^{theta U}]; +inf at and beyond the MGF boundary.
    ExtendedReal log_mgf(double theta) const;

    // Supremum of the finiteness domain of the MGF (+inf for deterministic).
    double mgf_sup() const;

    double mean() const;

    // Mean under the tilted law dP^theta/dP = e^{theta u - log MGF(theta)}.
    double tilted_mean(double theta) const;

    double sample(RngStream& g) const;

    // exponential(mu) -> exponential(mu - theta), gamma(a,b) -> gamma(a, b - theta),
    // deterministic(m) -> deterministic(m); theta must stay below the boundary.
    ClaimLaw tilted(double theta) const;

    std::string describe() const;  // "exp:mu" / "gamma:a:b" / "det:m"

private:
    ClaimLaw(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_;  // rate mu | shape | m
    double b_;  // unused  | rate  | unused
};

// Reserve model: fractional claim-number process, premium rate c, claim law.
// Initial capital u is a per-query argument.
struct RuinModel {
    FracParams frac;
    double premium_rate;
    ClaimLaw claims;

    RuinModel(FracParams f, double c, ClaimLaw u);
};

// log E[exp(theta (U - c T))] = claim log-MGF(theta) + holding log-MGF(-c theta).
ExtendedReal increment_log_mgf(const RuinModel& m, double theta);

// The unique positive zero of the increment log-MGF, interior to its
// finiteness domain: bracketed by scanning, refined to 1e-12, verified to
// |value| < 1e-10. Throws std::domain_error when no such root exists (for
// nu = 1 the net profit condition c > lambda E[U]/h is reported explicitly).
double lundberg_root(const RuinModel& m);

struct TiltCounters {
    std::uint64_t proposals = 0;
    std::uint64_t accepts = 0;
};

// One (claim, holding-time) pair under the exponentially tilted law at theta;
// components stay independent. Claims use the closed-form tilt. Holding
// times: Gamma(h, lambda + c theta) directly at nu = 1; for nu < 1 and
// theta > 0, rejection from the untilted sampler with acceptance probability
// exp(-c theta T), whose rate is (lambda/(lambda+(c theta)^nu))^h.
std::pair<double, double> sample_tilted_pair(const RuinModel& m, double theta,
                                             RngStream& g,
                                             TiltCounters* counters = nullptr);

struct RuinIsResult {
    McEstimate estimate;
    double lundberg_exponent = 0.0;  // tilt parameter used
    double acceptance_rate = 1.0;    // holding-time rejection sampler
    std::uint64_t max_steps_seen = 0;
};

// Importance-sampling estimate of the ruin probability psi(u): random walk
// steps U - cT simulated under the tilt theta = w until first passage above
// u; each replication contributes the likelihood weight e^{-w S_tau}.
// A replication exceeding step_cap aborts with diagnostics.
RuinIsResult estimate_ruin_importance(const RuinModel& m, double u,
                                      std::uint64_t n_rep, std::uint64_t seed,
                                      int n_threads = 0,
                                      std::uint64_t step_cap = 10000000);

struct RuinCrudeResult {
    McEstimate estimate;  // P(passage within step_horizon): lower bound of psi(u)
    bool lower_bound = true;
    std::uint64_t hits = 0;
    double rule_of_three_bound = 0.0;  // 3/n_rep, meaningful when hits == 0
};

// Untilted simulation, capped at step_horizon steps per replication.
RuinCrudeResult estimate_ruin_crude(const RuinModel& m, double u,
                                    std::uint64_t n_rep,
                                    std::uint64_t step_horizon,
                                    std::uint64_t seed, int n_threads = 0);

struct SlopeCheck {
    double slope = 0.0;
    double lundberg_exponent = 0.0;
    double rel_gap = 0.0;  // |slope + w| / w
    std::vector<RuinIsResult> per_u;
};

// Least-squares slope of log psi_hat(u) against u over an increasing grid of
// length >= 3, compared with -w.
SlopeCheck lundberg_slope_check(const RuinModel& m,
                                std::span<const double> u_grid,
                                std::uint64_t n_rep, std::uint64_t seed,
                                int n_threads = 0);

} // namespace fpp
