#pragma once

#include <cstdint>

#include "fpp/mittag_leffler.hpp"
#include "fpp/rng.hpp"

namespace fpp {

// Parameter triple (nu, h, lambda) of the renewal count process whose i.i.d.
// holding times have log-MGF h log(lambda / (lambda + (-theta)^nu)), theta <= 0.
struct FracParams {
    double nu;
    double h;
    double lambda;

    FracParams(double nu_, double h_, double lambda_);
};

// Holding-time density lambda^h t^{nu h - 1} E^h_{nu, nu h}(-lambda t^nu) on
// (0, inf); 0 for t <= 0. For plotting and validation only: the samplers
// below never evaluate it. Throws std::range_error when lambda t^nu exceeds
// the series guard.
double holding_time_pdf(const FracParams& p, double t,
                        const SeriesOptions& opt = {});

// One-sided stable draw with E[exp(-s S)] = exp(-s^nu), for 0 < nu < 1,
// from one uniform and one exponential variate (Kanter / CMS construction).
// nu = 1 is degenerate (S == 1) and rejected.
double sample_positive_stable(double nu, RngStream& g);

// Exact holding-time draw: Gamma(h, lambda)^{1/nu} * S_nu for nu < 1,
// Gamma(h, lambda) for nu = 1. Matches the holding-time Laplace transform
// (lambda / (lambda + s^nu))^h.
double sample_holding_time(const FracParams& p, RngStream& g);

/// Counting law at a fixed time t with pmf
///   P(X = k) = (lambda t^nu)^k / Gamma(nu k + 1) / E_{nu,1}(lambda t^nu),
/// a Poisson(lambda t^nu) law reweighted by w(k) = k!/Gamma(nu k + 1).
/// t = 0 is the point mass at 0.
class WeightedPoissonLaw {
public:
    WeightedPoissonLaw(double nu, double lambda, double t,
                       const SeriesOptions& opt = {});

    double nu() const { return nu_; }
    double lambda() const { return lambda_; }
    double t() const { return t_; }

    double log_pmf(std::int64_t k) const;

    // (lambda t^nu / nu) E_{nu,nu}(lambda t^nu) / E_{nu,1}(lambda t^nu),
    // evaluated through the log-scale evaluators.
    double mean() const;

    // log P(X >= ceil(threshold)); 0 for threshold <= 0.
    double log_tail(double threshold) const;

    // Inverse-CDF draw, scanning the cumulative pmf from k = 0.
    std::int64_t sample(RngStream& g) const;

    // Index where the pmf has fallen 40 nats below its peak (capped).
    std::int64_t truncation_horizon() const;

private:
    double nu_, lambda_, t_;
    double log_scale_;   // log(lambda t^nu)
    double log_norm_;    // log E_{nu,1}(lambda t^nu)
    bool point_mass_;    // t == 0
    SeriesOptions opt_;
};

} // namespace fpp
