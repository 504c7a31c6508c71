#include "fpp/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

namespace {

constexpr double kLogDoubleMax = 709.0;

// Consecutive negligible terms required before the series is declared
// converged; alternating series at z < 0 need the run length.
constexpr int kConvergedRun = 50;

void check_alpha(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::domain_error("mittag_leffler: alpha must be positive");
    }
}

// log |z^r / Gamma(alpha r + beta)| together with the sign of the term.
// Handles the Gamma poles and sign flips at alpha r + beta <= 0.
bool log_term_magnitude(double alpha, double beta, double z, std::int64_t r,
                        double& log_mag, int& sign) {
    double a = alpha * static_cast<double>(r) + beta;
    double inv = gamma_reciprocal(a);
    if (inv == 0.0) return false;  // pole: term vanishes
    sign = inv > 0.0 ? 1 : -1;
    if (z < 0.0 && (r & 1)) sign = -sign;
    double lz = (r == 0) ? 0.0 : static_cast<double>(r) * std::log(std::abs(z));
    log_mag = lz + std::log(std::abs(inv));
    return true;
}

// Signed Kahan-compensated series sum in linear space, used for z < 0 or
// beta <= 0 where terms change sign. Throws if any term magnitude overflows.
double signed_series(double alpha, double beta, double gamma_order, double z,
                     const SeriesOptions& opt, bool generalized) {
    double sum = 0.0, comp = 0.0;
    int run = 0;
    for (std::int64_t r = 0; r < opt.max_terms; ++r) {
        double log_mag;
        int sign;
        bool nonzero = log_term_magnitude(alpha, beta, z, r, log_mag, sign);
        if (nonzero && generalized) {
            log_mag += pochhammer_log(gamma_order, r) - std::lgamma(static_cast<double>(r) + 1.0);
        }
        double term = 0.0;
        if (nonzero) {
            if (log_mag > kLogDoubleMax) {
                throw std::range_error(
                    "mittag_leffler: series term overflows double; use "
                    "log_mittag_leffler or the asymptotic form");
            }
            term = sign * std::exp(log_mag);
        }
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
        if (std::abs(term) < tol) {
            if (++run >= kConvergedRun) return sum;
        } else {
            run = 0;
        }
    }
    throw std::range_error("mittag_leffler: series did not converge within max_terms");
}

// Max-term-scaled log of a positive-term series given its log-terms appended
// one by one. Terms are log-concave in r, so once they decay well past the
// running peak the remainder is negligible.
class LogSumAccumulator {
public:
    void add(double log_term) { log_terms_.push_back(log_term); }

    double max_log() const {
        double m = -std::numeric_limits<double>::infinity();
        for (double lt : log_terms_) m = std::max(m, lt);
        return m;
    }

    double logsum() const {
        double m = max_log();
        if (!std::isfinite(m)) return m;
        double s = 0.0, comp = 0.0;
        for (double lt : log_terms_) {
            double y = std::exp(lt - m) - comp;
            double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        return m + std::log(s);
    }

private:
    std::vector<double> log_terms_;
};

double log_series_positive(double alpha, double beta, double gamma_order,
                           double z, const SeriesOptions& opt,
                           bool generalized) {
    // z >= 0, beta > 0: every term is positive.
    LogSumAccumulator acc;
    double peak = -std::numeric_limits<double>::infinity();
    if (z == 0.0) {
        return -std::lgamma(beta);
    }
    const double logz = std::log(z);
    for (std::int64_t r = 0; r < opt.max_terms; ++r) {
        double lt = static_cast<double>(r) * logz -
                    std::lgamma(alpha * static_cast<double>(r) + beta);
        if (generalized) {
            lt += pochhammer_log(gamma_order, r) - std::lgamma(static_cast<double>(r) + 1.0);
        }
        acc.add(lt);
        peak = std::max(peak, lt);
        if (lt < peak - 50.0 && r > 1) {
            return acc.logsum();
        }
    }
    throw std::range_error("log_mittag_leffler: series did not converge within max_terms");
}

double series_eval(double alpha, double beta, double gamma_order, double z,
                   const SeriesOptions& opt, bool generalized) {
    check_alpha(alpha);
    if (std::abs(z) > opt.guard) {
        throw std::range_error(
            "mittag_leffler: |z| = " + std::to_string(std::abs(z)) +
            " exceeds the series guard " + std::to_string(opt.guard) +
            "; use log_mittag_leffler or the asymptotic form");
    }
    if (z >= 0.0 && beta > 0.0) {
        double ls = log_series_positive(alpha, beta, gamma_order, z, opt, generalized);
        if (ls > kLogDoubleMax) {
            throw std::range_error(
                "mittag_leffler: value overflows double; use log_mittag_leffler");
        }
        return std::exp(ls);
    }
    return signed_series(alpha, beta, gamma_order, z, opt, generalized);
}

} // namespace

double pochhammer_log(double gamma, std::int64_t r) {
    if (!(gamma > 0.0)) {
        throw std::domain_error("pochhammer_log: gamma must be positive");
    }
    if (r < 0) {
        throw std::domain_error("pochhammer_log: r must be nonnegative");
    }
    if (r == 0) return 0.0;
    return std::lgamma(gamma + static_cast<double>(r)) - std::lgamma(gamma);
}

double gamma_reciprocal(double x) {
    if (x > 0.0) {
        double lg = std::lgamma(x);
        return std::exp(-lg);
    }
    if (x == std::floor(x)) return 0.0;  // poles at 0, -1, -2, ...
    // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi.
    double lg = std::lgamma(1.0 - x);
    if (lg > kLogDoubleMax) return 0.0;
    return std::sin(std::numbers::pi * x) * std::exp(lg) / std::numbers::pi;
}

double mittag_leffler(double alpha, double beta, double z,
                      const SeriesOptions& opt) {
    check_alpha(alpha);
    if (alpha == 1.0 && beta == 1.0) {
        // E_{1,1} = exp exactly; the alternating series loses all relative
        // accuracy for moderately negative z.
        if (std::abs(z) > opt.guard) {
            throw std::range_error("mittag_leffler: |z| exceeds the series guard");
        }
        return std::exp(z);
    }
    return series_eval(alpha, beta, 1.0, z, opt, false);
}

double mittag_leffler_generalized(double alpha, double beta, double gamma,
                                  double z, const SeriesOptions& opt) {
    check_alpha(alpha);
    if (!(gamma > 0.0)) {
        throw std::domain_error("mittag_leffler_generalized: gamma must be positive");
    }
    return series_eval(alpha, beta, gamma, z, opt, true);
}

double log_mittag_leffler(double alpha, double beta, double z,
                          const SeriesOptions& opt) {
    check_alpha(alpha);
    if (!(z >= 0.0)) {
        throw std::domain_error("log_mittag_leffler: z must be nonnegative");
    }
    if (!(beta > 0.0)) {
        throw std::domain_error("log_mittag_leffler: beta must be positive");
    }
    if (alpha == 1.0 && beta == 1.0) return z;
    if (z > opt.guard) {
        return log_mittag_leffler_asymptotic(alpha, beta, z);
    }
    return log_series_positive(alpha, beta, 1.0, z, opt, false);
}

double mittag_leffler_asymptotic(double nu, double beta, double z) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw std::domain_error("mittag_leffler_asymptotic: nu must be in (0,1]");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("mittag_leffler_asymptotic: z must be positive");
    }
    return std::exp(log_mittag_leffler_asymptotic(nu, beta, z));
}

double log_mittag_leffler_asymptotic(double nu, double beta, double z) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw std::domain_error("mittag_leffler_asymptotic: nu must be in (0,1]");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("mittag_leffler_asymptotic: z must be positive");
    }
    // log[ (1/nu) z^{(1-beta)/nu} exp(z^{1/nu}) ]
    return std::pow(z, 1.0 / nu) + (1.0 - beta) / nu * std::log(z) - std::log(nu);
}

} // namespace fpp
