#include "fpp/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fpp/laws.hpp"

namespace fpp {

namespace {

void check_args(double nu, double lambda1, double lambda2) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw std::invalid_argument("relative_entropy: nu must be in (0,1]");
    }
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
        throw std::invalid_argument("relative_entropy: lambdas must be nonnegative");
    }
}

// Direct sum over k of P1(k) (log P1(k) - log P2(k)), truncated once the
// summand magnitude has dropped 40 nats below its running peak.
double entropy_direct_sum(const WeightedPoissonLaw& q1, const WeightedPoissonLaw& q2,
                          std::int64_t max_terms) {
    double sum = 0.0, comp = 0.0;
    double peak = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < max_terms; ++k) {
        double lp1 = q1.log_pmf(k);
        double summand = std::exp(lp1) * (lp1 - q2.log_pmf(k));
        double y = summand - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        double mag = lp1 + std::log1p(std::abs(lp1 - q2.log_pmf(k)));
        peak = std::max(peak, mag);
        if (mag < peak - 40.0 && k > 1) return sum;
    }
    throw std::runtime_error("relative_entropy: truncation horizon exceeded");
}

} // namespace

ExtendedReal relative_entropy(double nu, double lambda1, double lambda2,
                              double t, const SeriesOptions& opt) {
    check_args(nu, lambda1, lambda2);
    if (!(t > 0.0)) {
        throw std::invalid_argument("relative_entropy: t must be positive");
    }
    if (lambda1 == lambda2) return ExtendedReal(0.0);
    if (lambda2 == 0.0) return ExtendedReal::infinity();  // lambda1 > 0 here
    const double z2 = lambda2 * std::pow(t, nu);
    if (lambda1 == 0.0) {
        // Point mass against Q2: the sum collapses to -log P2(0).
        return ExtendedReal(log_mittag_leffler(nu, 1.0, z2, opt));
    }

    WeightedPoissonLaw q1(nu, lambda1, t, opt);
    WeightedPoissonLaw q2(nu, lambda2, t, opt);
    double direct = entropy_direct_sum(q1, q2, opt.max_terms);

    const double z1 = lambda1 * std::pow(t, nu);
    double closed = std::log(lambda1 / lambda2) * q1.mean() +
                    log_mittag_leffler(nu, 1.0, z2, opt) -
                    log_mittag_leffler(nu, 1.0, z1, opt);
    if (std::abs(direct - closed) > 1e-7 * (1.0 + std::abs(direct))) {
        throw std::runtime_error(
            "relative_entropy: direct sum and closed finite-t form disagree");
    }
    return ExtendedReal(direct);
}

ExtendedReal relative_entropy_rate(double nu, double lambda1, double lambda2) {
    check_args(nu, lambda1, lambda2);
    if (lambda1 == 0.0) {
        // 0 log 0 = 0 leaves only lambda2^{1/nu}.
        return ExtendedReal(std::pow(lambda2, 1.0 / nu));
    }
    if (lambda2 == 0.0) return ExtendedReal::infinity();
    double a = std::pow(lambda1, 1.0 / nu);
    double b = std::pow(lambda2, 1.0 / nu);
    return ExtendedReal(a * std::log(a / b) - a + b);
}

} // namespace fpp
