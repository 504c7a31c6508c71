#include "fpp/laws.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Truncation rule for pmf scans: stop once the log-pmf has fallen this many
// nats below its running peak.
constexpr double kTailNats = 40.0;

double log1p_exp_diff(double a, double b) {
    // log(e^a + e^b) without overflow.
    double m = std::max(a, b);
    if (!std::isfinite(m)) return m;
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

} // namespace

FracParams::FracParams(double nu_, double h_, double lambda_)
    : nu(nu_), h(h_), lambda(lambda_) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw std::invalid_argument("FracParams: nu must be in (0,1]");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("FracParams: h must be positive");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("FracParams: lambda must be positive");
    }
}

double holding_time_pdf(const FracParams& p, double t, const SeriesOptions& opt) {
    if (t <= 0.0) return 0.0;
    const double z = -p.lambda * std::pow(t, p.nu);
    // lambda^h t^{nu h - 1} E^h_{nu, nu h}(-lambda t^nu)
    double prefactor_log = p.h * std::log(p.lambda) + (p.nu * p.h - 1.0) * std::log(t);
    double series = mittag_leffler_generalized(p.nu, p.nu * p.h, p.h, z, opt);
    return std::exp(prefactor_log) * series;
}

double sample_positive_stable(double nu, RngStream& g) {
    if (!(nu > 0.0 && nu < 1.0)) {
        throw std::domain_error("sample_positive_stable: nu must be in (0,1)");
    }
    // S = sin(nu pi U) sin((1-nu) pi U)^{(1-nu)/nu} / sin(pi U)^{1/nu}
    //     * E^{-(1-nu)/nu},  U ~ U(0,1), E ~ Exp(1).
    const double u = uniform_open(g);
    const double e = sample_exponential(g);
    const double pi_u = std::numbers::pi * u;
    const double ratio = (1.0 - nu) / nu;
    double log_s = std::log(std::sin(nu * pi_u)) +
                   ratio * std::log(std::sin((1.0 - nu) * pi_u)) -
                   (1.0 / nu) * std::log(std::sin(pi_u)) -
                   ratio * std::log(e);
    return std::exp(log_s);
}

double sample_holding_time(const FracParams& p, RngStream& g) {
    double gamma_draw = sample_gamma(g, p.h, p.lambda);
    if (p.nu == 1.0) return gamma_draw;
    double stable = sample_positive_stable(p.nu, g);
    return std::pow(gamma_draw, 1.0 / p.nu) * stable;
}

WeightedPoissonLaw::WeightedPoissonLaw(double nu, double lambda, double t,
                                       const SeriesOptions& opt)
    : nu_(nu), lambda_(lambda), t_(t), opt_(opt) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw std::invalid_argument("WeightedPoissonLaw: nu must be in (0,1]");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("WeightedPoissonLaw: lambda must be positive");
    }
    if (!(t >= 0.0)) {
        throw std::invalid_argument("WeightedPoissonLaw: t must be nonnegative");
    }
    point_mass_ = (t == 0.0);
    if (point_mass_) {
        log_scale_ = kNegInf;
        log_norm_ = 0.0;
    } else {
        double z = lambda * std::pow(t, nu);
        log_scale_ = std::log(z);
        log_norm_ = log_mittag_leffler(nu, 1.0, z, opt);
    }
}

double WeightedPoissonLaw::log_pmf(std::int64_t k) const {
    if (k < 0) return kNegInf;
    if (point_mass_) return k == 0 ? 0.0 : kNegInf;
    double kd = static_cast<double>(k);
    return kd * log_scale_ - std::lgamma(nu_ * kd + 1.0) - log_norm_;
}

double WeightedPoissonLaw::mean() const {
    if (point_mass_) return 0.0;
    double z = lambda_ * std::pow(t_, nu_);
    // (z/nu) E_{nu,nu}(z) / E_{nu,1}(z), assembled in log scale.
    return std::exp(log_scale_ - std::log(nu_) +
                    log_mittag_leffler(nu_, nu_, z, opt_) - log_norm_);
}

std::int64_t WeightedPoissonLaw::truncation_horizon() const {
    if (point_mass_) return 0;
    double peak = kNegInf;
    for (std::int64_t k = 0; k < opt_.max_terms; ++k) {
        double lp = log_pmf(k);
        peak = std::max(peak, lp);
        if (lp < peak - kTailNats && k > 1) return k;
    }
    return opt_.max_terms;
}

double WeightedPoissonLaw::log_tail(double threshold) const {
    if (threshold <= 0.0) return 0.0;
    if (point_mass_) return kNegInf;
    const std::int64_t k0 = static_cast<std::int64_t>(std::ceil(threshold));
    // Shift by the largest log-pmf at or past k0; terms are unimodal in k.
    double m = log_pmf(k0);
    {
        double prev = m;
        for (std::int64_t k = k0 + 1; k < k0 + opt_.max_terms; ++k) {
            double lp = log_pmf(k);
            if (lp <= prev) break;
            m = std::max(m, lp);
            prev = lp;
        }
    }
    double sum = 0.0, comp = 0.0;
    double prev_lp = kNegInf;
    for (std::int64_t k = k0; k < k0 + opt_.max_terms; ++k) {
        double lp = log_pmf(k);
        double term = std::exp(lp - m);
        double y = term - comp;
        double tt = sum + y;
        comp = (tt - sum) - y;
        sum = tt;
        if (lp < prev_lp && term < sum * 1e-17) {
            // Decaying ratio: remaining mass is below 1e-15 of the sum.
            return m + std::log(sum);
        }
        prev_lp = lp;
    }
    throw std::runtime_error("WeightedPoissonLaw::log_tail: truncation horizon exceeded");
}

std::int64_t WeightedPoissonLaw::sample(RngStream& g) const {
    if (point_mass_) return 0;
    const double log_u = std::log(uniform_open(g));
    double log_cum = kNegInf;
    double peak = kNegInf;
    for (std::int64_t k = 0; k < opt_.max_terms; ++k) {
        double lp = log_pmf(k);
        log_cum = log1p_exp_diff(log_cum, lp);
        if (log_cum >= log_u) return k;
        peak = std::max(peak, lp);
        if (lp < peak - kTailNats && k > 1) {
            // Residual mass beyond here is ~e^{-40}; the cumulative sum must
            // already have absorbed the draw unless the horizon is misconfigured.
            if (log_cum < std::log1p(-1e-12)) {
                throw std::runtime_error(
                    "WeightedPoissonLaw::sample: truncation horizon exceeded with "
                    "cumulative mass below 1 - 1e-12");
            }
            return k;
        }
    }
    throw std::runtime_error("WeightedPoissonLaw::sample: truncation horizon exceeded");
}

} // namespace fpp
