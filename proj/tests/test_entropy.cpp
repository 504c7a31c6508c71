#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fpp/entropy.hpp"
#include "fpp/laws.hpp"
#include "fpp/mittag_leffler.hpp"
#include "fpp/rates.hpp"
#include "support/oracles.hpp"

using namespace fpp;

TEST_CASE("relative entropy vanishes between identical laws") {
    for (double nu : {0.4, 1.0}) {
        for (double lam : {0.0, 0.5, 2.0}) {
            for (double t : {0.3, 1.0, 12.0}) {
                CHECK(relative_entropy(nu, lam, lam, t).finite_value() == 0.0);
            }
        }
    }
}

TEST_CASE("relative entropy special lambda cases") {
    // Point mass against a spread-out law: -log P2(0).
    double want = static_cast<double>(std::log(oracles::ml_series_ld(0.6L, 1.0L, 2.0L)));
    CHECK(relative_entropy(0.6, 0.0, 2.0, 1.0).finite_value() ==
          doctest::Approx(want).epsilon(1e-10));
    CHECK(want == doctest::Approx(3.6811699359659132).epsilon(1e-13));
    // Spread-out law against a point mass: no absolute continuity.
    CHECK(relative_entropy(0.6, 2.0, 0.0, 1.0).is_infinite());
}

TEST_CASE("nu = 1 normalized entropy is t-free") {
    const double want = 2.0 * std::log(2.0) - 1.0;
    for (double t : {0.5, 1.0, 7.0}) {
        double h_over_t = relative_entropy(1, 2, 1, t).finite_value() / t;
        CHECK(h_over_t == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("entropy rate closed form") {
    CHECK(relative_entropy_rate(0.5, 0.0, 3.0).finite_value() == doctest::Approx(9.0));
    CHECK(relative_entropy_rate(0.7, 1.4, 1.4).finite_value() == 0.0);
    CHECK(relative_entropy_rate(0.5, 1.0, 2.0).finite_value() ==
          doctest::Approx(3.0 - std::log(4.0)).epsilon(1e-13));
    CHECK(relative_entropy_rate(0.5, 1.0, 0.0).is_infinite());
    CHECK(relative_entropy_rate(0.5, 0.0, 0.0).finite_value() == 0.0);
}

TEST_CASE("normalized entropy converges to the rate") {
    for (double nu : {0.5, 0.8, 1.0}) {
        double limit = relative_entropy_rate(nu, 1.0, 2.0).finite_value();
        double prev_gap = std::numeric_limits<double>::infinity();
        for (double t : {10.0, 20.0, 40.0, 80.0}) {
            double gap = std::abs(relative_entropy(nu, 1, 2, t).finite_value() / t - limit);
            // The true gaps collapse below double noise by t = 40, hence the
            // small slack on the monotone comparison.
            CHECK(gap <= prev_gap + 1e-9);
            prev_gap = gap;
        }
        CHECK(prev_gap < 0.05);
    }
}

TEST_CASE("rate identity with the weighted-Poisson rate function") {
    for (double nu : {0.4, 0.5, 0.8, 1.0}) {
        for (double lam : {0.5, 1.0, 2.0}) {
            for (double x : {0.0, 0.1, 0.7, 1.0, 2.5, 8.0}) {
                double lhs = weighted_poisson_rate(nu, lam, x).value.finite_value();
                double rhs = relative_entropy_rate(nu, std::pow(nu * x, nu), lam).finite_value();
                CHECK(std::abs(lhs - rhs) < 1e-10);
            }
        }
    }
}

TEST_CASE("entropy rate is positive off the diagonal") {
    for (double nu : {0.5, 0.9}) {
        for (double l1 : {0.0, 0.3, 1.0, 2.0}) {
            for (double l2 : {0.0, 0.4, 1.1, 3.0}) {
                if (l1 == l2) continue;
                ExtendedReal h = relative_entropy_rate(nu, l1, l2);
                CHECK((h.is_infinite() || h.finite_value() > 0.0));
            }
        }
    }
}

TEST_CASE("direct sum agrees with the closed finite-t form") {
    for (double nu : {0.5, 0.8}) {
        for (double t : {1.0, 4.0, 25.0}) {
            double direct = relative_entropy(nu, 1.0, 2.0, t).finite_value();
            double z1 = std::pow(t, nu), z2 = 2.0 * std::pow(t, nu);
            double closed = std::log(0.5) * WeightedPoissonLaw(nu, 1.0, t).mean() +
                            log_mittag_leffler(nu, 1, z2) - log_mittag_leffler(nu, 1, z1);
            CHECK(direct == doctest::Approx(closed).epsilon(1e-9));
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(relative_entropy(0.5, 1, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(relative_entropy(0.5, -1, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(relative_entropy(1.5, 1, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(relative_entropy_rate(0.0, 1, 2), std::invalid_argument);
}
