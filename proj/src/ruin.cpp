#include "fpp/ruin.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <atomic>
#include <cmath>
#include <sstream>

#include "fpp/parallel.hpp"
#include "fpp/rates.hpp"

namespace fpp {

ClaimLaw ClaimLaw::exponential(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("ClaimLaw: exponential rate must be positive");
    return ClaimLaw(Kind::exponential, mu, 0.0);
}

ClaimLaw ClaimLaw::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
        throw std::invalid_argument("ClaimLaw: gamma shape and rate must be positive");
    }
    return ClaimLaw(Kind::gamma, shape, rate);
}

ClaimLaw ClaimLaw::deterministic(double m) {
    if (!(m > 0.0)) throw std::invalid_argument("ClaimLaw: deterministic size must be positive");
    return ClaimLaw(Kind::deterministic, m, 0.0);
}

ExtendedReal ClaimLaw::log_mgf(double theta) const {
    switch (kind_) {
        case Kind::exponential:
            if (theta >= a_) return ExtendedReal::infinity();
            return ExtendedReal(std::log(a_ / (a_ - theta)));
        case Kind::gamma:
            if (theta >= b_) return ExtendedReal::infinity();
            return ExtendedReal(a_ * std::log(b_ / (b_ - theta)));
        case Kind::deterministic:
            return ExtendedReal(theta * a_);
    }
    throw std::logic_error("ClaimLaw: unreachable");
}

double ClaimLaw::mgf_sup() const {
    switch (kind_) {
        case Kind::exponential: return a_;
        case Kind::gamma: return b_;
        case Kind::deterministic: return std::numeric_limits<double>::infinity();
    }
    throw std::logic_error("ClaimLaw: unreachable");
}

double ClaimLaw::mean() const {
    switch (kind_) {
        case Kind::exponential: return 1.0 / a_;
        case Kind::gamma: return a_ / b_;
        case Kind::deterministic: return a_;
    }
    throw std::logic_error("ClaimLaw: unreachable");
}

double ClaimLaw::tilted_mean(double theta) const {
    return tilted(theta).mean();
}

double ClaimLaw::sample(RngStream& g) const {
    switch (kind_) {
        case Kind::exponential: return sample_exponential(g, a_);
        case Kind::gamma: return sample_gamma(g, a_, b_);
        case Kind::deterministic: return a_;
    }
    throw std::logic_error("ClaimLaw: unreachable");
}

ClaimLaw ClaimLaw::tilted(double theta) const {
    if (theta >= mgf_sup()) {
        throw std::domain_error("ClaimLaw::tilted: theta at or beyond the MGF boundary");
    }
    switch (kind_) {
        case Kind::exponential: return exponential(a_ - theta);
        case Kind::gamma: return gamma(a_, b_ - theta);
        case Kind::deterministic: return *this;
    }
    throw std::logic_error("ClaimLaw: unreachable");
}

std::string ClaimLaw::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::exponential: os << "exp:" << a_; break;
        case Kind::gamma: os << "gamma:" << a_ << ":" << b_; break;
        case Kind::deterministic: os << "det:" << a_; break;
    }
    return os.str();
}

RuinModel::RuinModel(FracParams f, double c, ClaimLaw u)
    : frac(f), premium_rate(c), claims(u) {
    if (!(c > 0.0)) throw std::invalid_argument("RuinModel: premium rate must be positive");
}

ExtendedReal increment_log_mgf(const RuinModel& m, double theta) {
    return m.claims.log_mgf(theta) +
           holding_log_mgf(m.frac, -m.premium_rate * theta);
}

double lundberg_root(const RuinModel& m) {
    const double b_sup = m.claims.mgf_sup();

    if (m.frac.nu == 1.0) {
        // Nontrivial only under the net profit condition.
        double required = m.frac.lambda * m.claims.mean() / m.frac.h;
        if (!(m.premium_rate > required)) {
            std::ostringstream os;
            os << "lundberg_root: net profit condition violated: premium rate c="
               << m.premium_rate << " must exceed lambda E[U]/h=" << required;
            throw std::domain_error(os.str());
        }
    }

    auto kt = [&](double theta) { return increment_log_mgf(m, theta); };

    // Upper bracket end: walk toward the MGF boundary (or outward when the
    // domain is unbounded) until the log-MGF turns positive.
    double theta_hi = 0.0;
    bool found_hi = false;
    if (std::isfinite(b_sup)) {
        for (int k = 1; k <= 60; ++k) {
            double theta = b_sup * (1.0 - std::ldexp(1.0, -k));
            ExtendedReal v = kt(theta);
            if (v.is_finite() && v.finite_value() > 0.0) {
                theta_hi = theta;
                found_hi = true;
                break;
            }
        }
    } else {
        for (int k = 0; k <= 60; ++k) {
            double theta = std::ldexp(1.0, k);
            ExtendedReal v = kt(theta);
            if (v.is_finite() && v.finite_value() > 0.0) {
                theta_hi = theta;
                found_hi = true;
                break;
            }
        }
    }
    if (!found_hi) {
        throw std::domain_error(
            "lundberg_root: condition C1 fails: no positive point with "
            "positive log-MGF inside the finiteness domain");
    }

    // Lower bracket end: the log-MGF dips negative just right of 0.
    double theta_lo = 0.0;
    bool found_lo = false;
    for (int k = 1; k <= 200; ++k) {
        double theta = theta_hi * std::ldexp(1.0, -k);
        if (theta <= 0.0) break;
        ExtendedReal v = kt(theta);
        if (v.is_finite() && v.finite_value() < 0.0) {
            theta_lo = theta;
            found_lo = true;
            break;
        }
    }
    if (!found_lo) {
        throw std::domain_error(
            "lundberg_root: condition C1 fails: log-MGF has no negative "
            "stretch right of zero");
    }

    auto f = [&](double theta) { return kt(theta).finite_value(); };
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t max_iter = 200;
    auto bracket = boost::math::tools::toms748_solve(f, theta_lo, theta_hi,
                                                     f(theta_lo), f(theta_hi),
                                                     tol, max_iter);
    double w = 0.5 * (bracket.first + bracket.second);

    if (std::abs(f(w)) > 1e-10) {
        throw std::runtime_error("lundberg_root: root verification failed");
    }
    if (std::isfinite(b_sup) && !(w < b_sup * (1.0 - 1e-12))) {
        throw std::domain_error(
            "lundberg_root: condition C1 fails: root sits on the boundary of "
            "the finiteness domain");
    }
    return w;
}

std::pair<double, double> sample_tilted_pair(const RuinModel& m, double theta,
                                             RngStream& g,
                                             TiltCounters* counters) {
    if (increment_log_mgf(m, theta).is_infinite()) {
        throw std::domain_error(
            "sample_tilted_pair: theta outside the finiteness domain");
    }
    const double c = m.premium_rate;
    double u_claim = m.claims.tilted(theta).sample(g);

    double t_hold;
    if (m.frac.nu == 1.0) {
        // Tilted holding times stay Gamma: rate shifts to lambda + c theta.
        t_hold = sample_gamma(g, m.frac.h, m.frac.lambda + c * theta);
    } else if (theta == 0.0) {
        t_hold = sample_holding_time(m.frac, g);
    } else {
        // No closed-form tilted law here: rejection with acceptance
        // probability e^{-c theta T}, mean rate (lambda/(lambda+(c theta)^nu))^h.
        constexpr std::uint64_t kProposalCap = 100000000;
        std::uint64_t proposals = 0;
        for (;;) {
            double t = sample_holding_time(m.frac, g);
            ++proposals;
            if (counters) ++counters->proposals;
            bool accept = uniform_open(g) < std::exp(-c * theta * t);
            if (accept) {
                if (counters) ++counters->accepts;
                t_hold = t;
                break;
            }
            if (proposals >= kProposalCap) {
                throw std::runtime_error(
                    "sample_tilted_pair: rejection sampler exceeded proposal cap");
            }
        }
    }
    return {u_claim, t_hold};
}

namespace {

// Tilted mean of one holding time, d/dtheta' of the log-MGF at theta' = -c theta.
double tilted_holding_mean(const FracParams& p, double c_theta) {
    if (p.nu == 1.0) return p.h / (p.lambda + c_theta);
    if (c_theta == 0.0) {
        return std::numeric_limits<double>::infinity();  // raw mean, nu < 1
    }
    return p.h * p.nu * std::pow(c_theta, p.nu - 1.0) /
           (p.lambda + std::pow(c_theta, p.nu));
}

} // namespace

RuinIsResult estimate_ruin_importance(const RuinModel& m, double u,
                                      std::uint64_t n_rep, std::uint64_t seed,
                                      int n_threads, std::uint64_t step_cap) {
    if (!(u > 0.0)) throw std::invalid_argument("estimate_ruin_importance: u must be positive");
    if (n_rep == 0) throw std::invalid_argument("estimate_ruin_importance: n_rep must be positive");

    const double w = lundberg_root(m);
    const double c = m.premium_rate;

    // Under the tilt at w the mean step must be positive, so first passage is
    // almost surely finite. A failure here is a configuration error.
    double drift = m.claims.tilted_mean(w) - c * tilted_holding_mean(m.frac, c * w);
    if (!(drift > 0.0)) {
        throw std::runtime_error(
            "estimate_ruin_importance: tilted mean step is not positive");
    }

    std::vector<double> weights(n_rep);
    std::atomic<std::uint64_t> proposals{0}, accepts{0}, max_steps{0};
    std::atomic<bool> capped{false};

    parallel_for(n_rep, n_threads, [&](std::uint64_t b, std::uint64_t e) {
        TiltCounters local;
        std::uint64_t local_max = 0;
        for (std::uint64_t i = b; i < e; ++i) {
            if (capped.load(std::memory_order_relaxed)) return;
            RngStream g = substream(seed, i);
            double s = 0.0;
            std::uint64_t steps = 0;
            for (;;) {
                auto [uc, th] = sample_tilted_pair(m, w, g, &local);
                s += uc - c * th;
                ++steps;
                if (s > u) break;
                if (steps >= step_cap) {
                    capped.store(true, std::memory_order_relaxed);
                    return;
                }
            }
            local_max = std::max(local_max, steps);
            weights[i] = std::exp(-w * s);
        }
        proposals.fetch_add(local.proposals, std::memory_order_relaxed);
        accepts.fetch_add(local.accepts, std::memory_order_relaxed);
        std::uint64_t seen = max_steps.load(std::memory_order_relaxed);
        while (local_max > seen &&
               !max_steps.compare_exchange_weak(seen, local_max, std::memory_order_relaxed)) {
        }
    });

    if (capped.load()) {
        std::ostringstream os;
        os << "estimate_ruin_importance: a replication exceeded the step cap "
           << step_cap << " before first passage (u=" << u << ", w=" << w
           << "); the tilted dynamics look wrong";
        throw std::runtime_error(os.str());
    }

    McEstimate est;
    est.n_rep = n_rep;
    est.seed = seed;
    mean_and_std_error(weights, est.value, est.std_error);
    if (!(est.value > 0.0 && est.value < 1.0)) {
        throw std::runtime_error(
            "estimate_ruin_importance: estimate escaped (0,1)");
    }

    RuinIsResult out;
    out.estimate = est;
    out.lundberg_exponent = w;
    out.acceptance_rate = proposals.load() == 0
                              ? 1.0
                              : static_cast<double>(accepts.load()) /
                                    static_cast<double>(proposals.load());
    out.max_steps_seen = max_steps.load();
    return out;
}

RuinCrudeResult estimate_ruin_crude(const RuinModel& m, double u,
                                    std::uint64_t n_rep,
                                    std::uint64_t step_horizon,
                                    std::uint64_t seed, int n_threads) {
    if (!(u > 0.0)) throw std::invalid_argument("estimate_ruin_crude: u must be positive");
    if (n_rep == 0) throw std::invalid_argument("estimate_ruin_crude: n_rep must be positive");

    // When the Lundberg root exists, a walk that has sunk below u - 45/w can
    // still pass above u only with probability <= e^{-45}; replications are
    // abandoned there. Without a root the full horizon is honored.
    double abandon_level = -std::numeric_limits<double>::infinity();
    try {
        abandon_level = u - 45.0 / lundberg_root(m);
    } catch (const std::exception&) {
    }

    const double c = m.premium_rate;
    std::vector<double> hit(n_rep);
    parallel_for(n_rep, n_threads, [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
            RngStream g = substream(seed, i);
            double s = 0.0;
            hit[i] = 0.0;
            for (std::uint64_t step = 0; step < step_horizon; ++step) {
                s += m.claims.sample(g) - c * sample_holding_time(m.frac, g);
                if (s > u) {
                    hit[i] = 1.0;
                    break;
                }
                if (s < abandon_level) break;
            }
        }
    });

    RuinCrudeResult out;
    out.estimate.n_rep = n_rep;
    out.estimate.seed = seed;
    mean_and_std_error(hit, out.estimate.value, out.estimate.std_error);
    out.hits = static_cast<std::uint64_t>(
        std::llround(out.estimate.value * static_cast<double>(n_rep)));
    out.rule_of_three_bound = 3.0 / static_cast<double>(n_rep);
    return out;
}

SlopeCheck lundberg_slope_check(const RuinModel& m,
                                std::span<const double> u_grid,
                                std::uint64_t n_rep, std::uint64_t seed,
                                int n_threads) {
    if (u_grid.size() < 3) {
        throw std::invalid_argument("lundberg_slope_check: u_grid needs length >= 3");
    }
    for (std::size_t j = 1; j < u_grid.size(); ++j) {
        if (!(u_grid[j] > u_grid[j - 1])) {
            throw std::invalid_argument("lundberg_slope_check: u_grid must be increasing");
        }
    }

    SlopeCheck out;
    out.lundberg_exponent = lundberg_root(m);
    std::vector<double> logs(u_grid.size());
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        RuinIsResult r = estimate_ruin_importance(m, u_grid[j], n_rep,
                                                  derive_seed(seed, j), n_threads);
        logs[j] = std::log(r.estimate.value);
        out.per_u.push_back(std::move(r));
    }

    double u_bar = 0.0, y_bar = 0.0;
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        u_bar += u_grid[j];
        y_bar += logs[j];
    }
    u_bar /= static_cast<double>(u_grid.size());
    y_bar /= static_cast<double>(u_grid.size());
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        num += (u_grid[j] - u_bar) * (logs[j] - y_bar);
        den += (u_grid[j] - u_bar) * (u_grid[j] - u_bar);
    }
    out.slope = num / den;
    out.rel_gap = std::abs(out.slope + out.lundberg_exponent) / out.lundberg_exponent;
    return out;
}

} // namespace fpp
