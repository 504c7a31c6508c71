#include "fpp/simulate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fpp/parallel.hpp"

namespace fpp {

std::int64_t simulate_count(const FracParams& p, double t, RngStream& g) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("simulate_count: t must be positive");
    }
    std::int64_t n = 0;
    double clock = sample_holding_time(p, g);
    while (clock <= t) {
        ++n;
        clock += sample_holding_time(p, g);
    }
    return n;
}

RenewalPath simulate_path(const FracParams& p, double t, RngStream& g) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("simulate_path: t must be positive");
    }
    RenewalPath path{p, t, {}};
    double clock = sample_holding_time(p, g);
    while (clock <= t) {
        path.arrivals.push_back(clock);
        clock += sample_holding_time(p, g);
    }
    return path;
}

std::vector<ProfilePoint> ldp_profile_renewal(const FracParams& p, double x,
                                              std::span<const double> t_grid,
                                              std::uint64_t n_rep,
                                              std::uint64_t seed,
                                              int n_threads) {
    if (n_rep == 0) {
        throw std::invalid_argument("ldp_profile_renewal: n_rep must be positive");
    }
    std::vector<ProfilePoint> out;
    out.reserve(t_grid.size());
    bool any_hits = false;
    for (std::size_t cell = 0; cell < t_grid.size(); ++cell) {
        const double t = t_grid[cell];
        if (!(t > 0.0)) {
            throw std::invalid_argument("ldp_profile_renewal: t values must be positive");
        }
        std::vector<double> hit(n_rep);
        parallel_for(n_rep, n_threads, [&](std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t i = b; i < e; ++i) {
                RngStream g = substream(seed, cell * n_rep + i);
                std::int64_t count = simulate_count(p, t, g);
                hit[i] = (static_cast<double>(count) / t >= x) ? 1.0 : 0.0;
            }
        });
        double p_hat, se_p;
        mean_and_std_error(hit, p_hat, se_p);
        if (p_hat == 0.0) {
            // Rule-of-three upper bound on the probability gives a one-sided
            // lower bound for the decay exponent.
            double bound = -std::log(3.0 / static_cast<double>(n_rep)) / t;
            out.push_back({t, bound, 0.0, true});
        } else {
            any_hits = true;
            double value = -std::log(p_hat) / t;
            double se = se_p / (t * p_hat);  // delta method on -log(p)/t
            out.push_back({t, value, se, false});
        }
    }
    if (!any_hits) {
        std::ostringstream msg;
        msg << "ldp_profile_renewal: no hits in any cell at n_rep=" << n_rep
            << "; the event {M(t)/t >= " << x
            << "} is too rare at these replication counts";
        throw InsufficientReplicationsError(msg.str());
    }
    return out;
}

std::vector<ProfilePoint> ldp_profile_weighted(double nu, double lambda,
                                               double x,
                                               std::span<const double> t_grid) {
    std::vector<ProfilePoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("ldp_profile_weighted: t values must be positive");
        }
        WeightedPoissonLaw law(nu, lambda, t);
        double value = -law.log_tail(x * t) / t;
        out.push_back({t, value, 0.0, false});
    }
    return out;
}

double subordinated_pmf(double lambda, double t, std::int64_t k) {
    if (!(lambda > 0.0) || !(t > 0.0)) {
        throw std::invalid_argument("subordinated_pmf: lambda and t must be positive");
    }
    if (k < 0) return 0.0;

    const double sigma = std::sqrt(2.0 * t);  // Var |B(2t)| source scale
    const double kd = static_cast<double>(k);
    const double lgk = std::lgamma(kd + 1.0);
    // Poisson(lambda y) pmf at k times the half-normal(variance 2t) density.
    auto integrand = [&](double y) {
        if (y <= 0.0) return 0.0;
        double log_pois = kd * std::log(lambda * y) - lambda * y - lgk;
        double log_halfnormal = -y * y / (4.0 * t) -
                                std::log(std::numbers::pi * t) * 0.5;
        return std::exp(log_pois + log_halfnormal);
    };

    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double tol = 1e-12;

    // Split at the half-normal 99.9999% quantile; the two-sided standard
    // normal 1e-6 point is 4.891638.
    const double y_split = 4.891638475699716 * sigma;
    double err1 = 0.0, err2 = 0.0;
    double head = quad::integrate(integrand, 0.0, y_split, 15, tol, &err1);

    // Tail via y = y_split - sigma log(u): the Gaussian factor decays faster
    // than the 1/u Jacobian grows, so the substituted integrand is bounded.
    auto tail_integrand = [&](double u) {
        double y = y_split - sigma * std::log(u);
        return integrand(y) * sigma / u;
    };
    double tail = quad::integrate(tail_integrand, 0.0, 1.0, 15, tol, &err2);

    if (err1 > 1e-10 || err2 > 1e-10 || !std::isfinite(head + tail)) {
        std::ostringstream msg;
        msg << "subordinated_pmf: quadrature did not converge (lambda=" << lambda
            << ", t=" << t << ", k=" << k << ", err_head=" << err1
            << ", err_tail=" << err2 << ")";
        throw std::runtime_error(msg.str());
    }
    return head + tail;
}

} // namespace fpp
