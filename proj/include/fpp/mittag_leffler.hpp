#pragma once

#include <cstdint>

namespace fpp {

// Tolerances and the domain guard for the power-series evaluators.
struct SeriesOptions {
    double guard = 100.0;        // refuse the plain series for |z| beyond this
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::int64_t max_terms = 1000000;
};

// log (gamma)_r = log Gamma(gamma + r) - log Gamma(gamma); exactly 0 at r = 0.
double pochhammer_log(double gamma, std::int64_t r);

// 1/Gamma(x) as an entire function: 0 at the poles x = 0, -1, -2, ...
double gamma_reciprocal(double x);

/// E_{alpha,beta}(z) = sum_{r>=0} z^r / Gamma(alpha r + beta).
///
/// Throws std::range_error when |z| exceeds the guard or the sum overflows
/// double range; use log_mittag_leffler or the asymptotic form instead.
double mittag_leffler(double alpha, double beta, double z,
                      const SeriesOptions& opt = {});

/// E^gamma_{alpha,beta}(z) = sum_{r>=0} (gamma)_r z^r / (r! Gamma(alpha r + beta)).
double mittag_leffler_generalized(double alpha, double beta, double gamma,
                                  double z, const SeriesOptions& opt = {});

/// log E_{alpha,beta}(z) for z >= 0 and beta > 0, stable for large z.
/// Inside the guard: max-term-scaled log-sum of the series terms.
/// Beyond the guard: the z^{1/alpha}-dominant asymptotic log form.
double log_mittag_leffler(double alpha, double beta, double z,
                          const SeriesOptions& opt = {});

// Leading large-z term (1/nu) z^{(1-beta)/nu} exp(z^{1/nu}). Intended for
// ratio tests and the log_mittag_leffler fallback, not general evaluation.
double mittag_leffler_asymptotic(double nu, double beta, double z);
double log_mittag_leffler_asymptotic(double nu, double beta, double z);

} // namespace fpp
