#include "fpp/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest |theta| probed before the objective is declared unbounded.
constexpr double kEdge = 0x1p60;

double golden_value(const std::function<double(double)>& g, double a, double b) {
    // Golden-section maximization inside [a, b], down to a 1e-13 relative
    // interval; returns the best point seen.
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    double best_x = f1 >= f2 ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (int i = 0; i < 120 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = g(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = g(x1);
        }
        if (f1 > best_f) { best_f = f1; best_x = x1; }
        if (f2 > best_f) { best_f = f2; best_x = x2; }
    }
    return best_x;
}

} // namespace

const char* to_string(RateMethod m) {
    switch (m) {
        case RateMethod::closed_nu1: return "closed_nu1";
        case RateMethod::closed_nu_half: return "closed_nu_half";
        case RateMethod::numeric_conjugate: return "numeric_conjugate";
        case RateMethod::composition: return "composition";
        case RateMethod::alternative_A: return "alternative_A";
    }
    return "unknown";
}

ExtendedReal holding_log_mgf(const FracParams& p, double theta) {
    if (p.nu == 1.0) {
        if (theta >= p.lambda) return ExtendedReal::infinity();
        return ExtendedReal(p.h * std::log(p.lambda / (p.lambda - theta)));
    }
    if (theta > 0.0) return ExtendedReal::infinity();
    return ExtendedReal(p.h * std::log(p.lambda / (p.lambda + std::pow(-theta, p.nu))));
}

double limiting_cgf(const FracParams& p, double theta) {
    double base = p.lambda * std::expm1(theta / p.h);
    if (p.nu == 1.0) return base;
    if (theta < 0.0) return 0.0;
    return std::pow(base, 1.0 / p.nu);
}

RateEvaluation legendre_conjugate(const std::function<double(double)>& f,
                                  double x, Interval domain) {
    auto g = [&](double theta) {
        double v = f(theta);
        if (!std::isfinite(v)) {
            throw std::invalid_argument(
                "legendre_conjugate: f is not finite inside the claimed domain");
        }
        return theta * x - v;
    };

    // Geometric probe grid covering the domain, approaching finite endpoints
    // without touching them.
    std::vector<double> probes;
    auto push = [&](double t) {
        if (t > domain.lo && t < domain.hi && std::isfinite(t)) probes.push_back(t);
    };
    if (std::isfinite(domain.lo)) {
        probes.push_back(domain.lo);  // closed at a finite lower endpoint
        for (int k = 50; k >= -50; --k) push(domain.lo + std::ldexp(1.0, -k) * (1.0 + std::abs(domain.lo)));
    }
    if (std::isfinite(domain.hi)) {
        for (int k = -50; k <= 50; ++k) push(domain.hi - std::ldexp(1.0, -k) * (1.0 + std::abs(domain.hi)));
        probes.push_back(domain.hi);  // closed at a finite upper endpoint
    }
    push(0.0);
    for (int k = -60; k <= 60; ++k) {
        push(std::ldexp(1.0, k));
        push(-std::ldexp(1.0, k));
    }
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

    // Finite endpoints are included only if f is finite there.
    std::vector<double> vals;
    std::vector<double> kept;
    for (double t : probes) {
        double v = f(t);
        if ((t == domain.lo || t == domain.hi) && !std::isfinite(v)) continue;
        if (!std::isfinite(v)) {
            throw std::invalid_argument(
                "legendre_conjugate: f is not finite inside the claimed domain");
        }
        kept.push_back(t);
        vals.push_back(t * x - v);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] > vals[best]) best = i;
    }

    // Growth at an infinite domain edge means the supremum is +inf; a flat
    // approach to the edge means the supremum is the asymptote.
    if (best == vals.size() - 1 && !std::isfinite(domain.hi)) {
        double step = vals[best] - vals[best - 1];
        if (step > 1e-9 * (1.0 + std::abs(vals[best]))) {
            return {x, ExtendedReal::infinity(), RateMethod::numeric_conjugate, std::nullopt};
        }
        return {x, ExtendedReal(vals[best]), RateMethod::numeric_conjugate, std::nullopt};
    }
    if (best == 0 && !std::isfinite(domain.lo)) {
        double step = vals[0] - vals[1];
        if (step > 1e-9 * (1.0 + std::abs(vals[0]))) {
            return {x, ExtendedReal::infinity(), RateMethod::numeric_conjugate, std::nullopt};
        }
        return {x, ExtendedReal(vals[0]), RateMethod::numeric_conjugate, std::nullopt};
    }
    if (best == 0 || best == vals.size() - 1) {
        // Supremum attained at (or arbitrarily close to) a finite endpoint.
        return {x, ExtendedReal(vals[best]), RateMethod::numeric_conjugate, kept[best]};
    }

    // Concavity: the grid argmax brackets the maximizer.
    double lo = kept[best - 1], hi = kept[best + 1];

    // Bisection on the finite-difference derivative sign, stopped while the
    // difference still clears rounding noise; golden section finishes the
    // interval down to the 1e-12 relative target on values alone.
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double width = hi - lo;
        if (width < 1e-8 * (1.0 + std::abs(mid))) break;
        double delta = width / 16.0;
        double slope = g(mid + delta) - g(mid - delta);
        if (slope > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double theta_star = golden_value(g, lo, hi);
    double value = g(theta_star);
    // Guard against degenerate refinement: never report below a probed value.
    value = std::max(value, vals[best]);
    return {x, ExtendedReal(value), RateMethod::numeric_conjugate, theta_star};
}

namespace {

RateEvaluation holding_rate_closed_nu1(const FracParams& p, double x) {
    if (x <= 0.0) return {x, ExtendedReal::infinity(), RateMethod::closed_nu1, std::nullopt};
    double r = p.lambda * x / p.h;
    return {x, ExtendedReal(p.h * (r - 1.0 - std::log(r))), RateMethod::closed_nu1, std::nullopt};
}

RateEvaluation holding_rate_closed_half(const FracParams& p, double x) {
    if (x <= 0.0) return {x, ExtendedReal::infinity(), RateMethod::closed_nu_half, std::nullopt};
    double lam = p.lambda, h = p.h;
    double root = std::sqrt(lam * lam + 2.0 * h / x);
    double v = -x * (0.5 * root - 0.5 * lam) * (0.5 * root - 0.5 * lam) +
               h * std::log(0.5 + 0.5 * std::sqrt(1.0 + 2.0 * h / (lam * lam * x)));
    return {x, ExtendedReal(v), RateMethod::closed_nu_half, std::nullopt};
}

} // namespace

RateEvaluation holding_mean_rate_numeric(const FracParams& p, double x) {
    if (x <= 0.0) {
        return {x, ExtendedReal::infinity(), RateMethod::numeric_conjugate, std::nullopt};
    }
    // The conjugate engine drops a finite endpoint where f blows up (the
    // nu = 1 domain is open at lambda), so render +inf as IEEE inf here.
    auto f = [&](double theta) {
        ExtendedReal v = holding_log_mgf(p, theta);
        return v.is_finite() ? v.finite_value() : std::numeric_limits<double>::infinity();
    };
    Interval dom{-kInf, p.nu == 1.0 ? p.lambda : 0.0};
    return legendre_conjugate(f, x, dom);
}

RateEvaluation holding_mean_rate(const FracParams& p, double x) {
    if (p.nu == 1.0) return holding_rate_closed_nu1(p, x);
    if (p.nu == 0.5) return holding_rate_closed_half(p, x);
    return holding_mean_rate_numeric(p, x);
}

RateEvaluation count_rate(const FracParams& p, double x) {
    if (x < 0.0) {
        RateMethod m = p.nu == 1.0   ? RateMethod::closed_nu1
                       : p.nu == 0.5 ? RateMethod::closed_nu_half
                                     : RateMethod::numeric_conjugate;
        return {x, ExtendedReal::infinity(), m, std::nullopt};
    }
    if (p.nu == 1.0) {
        // h x log(h x / lambda) - h x + lambda, with 0 log 0 = 0.
        double hx = p.h * x;
        double v = (x == 0.0) ? p.lambda : hx * std::log(hx / p.lambda) - hx + p.lambda;
        return {x, ExtendedReal(v), RateMethod::closed_nu1, std::nullopt};
    }
    if (x == 0.0) return {x, ExtendedReal(0.0), RateMethod::numeric_conjugate, std::nullopt};
    if (p.nu == 0.5) {
        double lam = p.lambda, h = p.h;
        double v = h * x * std::log(0.5 + 0.5 * std::sqrt(1.0 + 2.0 * h * x / (lam * lam))) -
                   (0.5 * std::sqrt(lam * lam + 2.0 * h * x) - 0.5 * lam) *
                       (0.5 * std::sqrt(lam * lam + 2.0 * h * x) - 0.5 * lam);
        return {x, ExtendedReal(v), RateMethod::closed_nu_half, std::nullopt};
    }
    RateEvaluation inner = holding_mean_rate(p, 1.0 / x);
    ExtendedReal v = inner.value.is_infinite() ? ExtendedReal::infinity()
                                               : ExtendedReal(x * inner.value.finite_value());
    return {x, v, inner.method, inner.optimizer_location};
}

RateEvaluation count_rate_numeric(const FracParams& p, double x) {
    if (x < 0.0) return {x, ExtendedReal::infinity(), RateMethod::numeric_conjugate, std::nullopt};
    if (x == 0.0) {
        double v = p.nu == 1.0 ? p.lambda : 0.0;
        return {x, ExtendedReal(v), RateMethod::numeric_conjugate, std::nullopt};
    }
    RateEvaluation inner = holding_mean_rate_numeric(p, 1.0 / x);
    ExtendedReal v = inner.value.is_infinite() ? ExtendedReal::infinity()
                                               : ExtendedReal(x * inner.value.finite_value());
    return {x, v, RateMethod::numeric_conjugate, inner.optimizer_location};
}

RateEvaluation weighted_poisson_rate(double nu, double lambda, double x) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw std::invalid_argument("weighted_poisson_rate: nu must be in (0,1]");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("weighted_poisson_rate: lambda must be positive");
    }
    if (x < 0.0) {
        return {x, ExtendedReal::infinity(), RateMethod::alternative_A, std::nullopt};
    }
    double scale = std::pow(lambda, 1.0 / nu);
    double nx = nu * x;
    double v = (x == 0.0) ? scale : nx * std::log(nx / scale) - nx + scale;
    return {x, ExtendedReal(v), RateMethod::alternative_A, std::nullopt};
}

RateEvaluation composition_rate(double lambda, double x) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("composition_rate: lambda must be positive");
    }
    if (x < 0.0) return {x, ExtendedReal::infinity(), RateMethod::composition, std::nullopt};
    if (x == 0.0) return {x, ExtendedReal(0.0), RateMethod::composition, 0.0};

    auto objective = [&](double y) {
        return x * std::log(x / (lambda * y)) - x + lambda * y + y * y / 4.0;
    };
    auto derivative = [&](double y) { return -x / y + lambda + 0.5 * y; };

    // Analytic minimizer seeds the bracket; bisection confirms it.
    const double y_star = std::sqrt(lambda * lambda + 2.0 * x) - lambda;
    double lo = std::min(y_star, 1e-12);
    double hi = x / lambda + 2.0 * std::sqrt(x) + 1.0;
    while (derivative(lo) >= 0.0) lo *= 0.5;  // derivative < 0 near 0
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * (1.0 + hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (derivative(mid) < 0.0 ? lo : hi) = mid;
    }
    double y_bisect = 0.5 * (lo + hi);
    if (std::abs(y_bisect - y_star) > 1e-9 * (1.0 + std::abs(y_star))) {
        throw std::runtime_error(
            "composition_rate: bisection minimizer disagrees with the analytic one");
    }
    return {x, ExtendedReal(objective(y_bisect)), RateMethod::composition, y_bisect};
}

double cgf_inverse_residual(const FracParams& p, double theta) {
    if (p.nu < 1.0 && theta < 0.0) {
        throw std::domain_error(
            "cgf_inverse_residual: theta must be nonnegative for nu in (0,1)");
    }
    double lam = limiting_cgf(p, theta);
    ExtendedReal k = holding_log_mgf(p, -lam);
    return std::abs(k.finite_value() + theta);
}

} // namespace fpp
