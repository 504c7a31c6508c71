#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fpp/extended_real.hpp"
#include "fpp/laws.hpp"

namespace fpp {

enum class RateMethod {
    closed_nu1,
    closed_nu_half,
    numeric_conjugate,
    composition,
    alternative_A,
};

const char* to_string(RateMethod m);

// One rate-function query: the point, the extended-real value, how it was
// computed, and the optimizer location when a numeric search ran.
struct RateEvaluation {
    double x;
    ExtendedReal value;
    RateMethod method;
    std::optional<double> optimizer_location;
};

// log E[e^{theta T}] of one holding time:
//   nu < 1:  h log(lambda/(lambda+(-theta)^nu)) for theta <= 0, +inf above;
//   nu = 1:  h log(lambda/(lambda-theta)) for theta < lambda, +inf above.
ExtendedReal holding_log_mgf(const FracParams& p, double theta);

// Limiting scaled CGF of the counting process:
//   lambda (e^{theta/h} - 1)            for nu = 1,
//   (lambda (e^{theta/h} - 1))^{1/nu}   for nu < 1 and theta >= 0, else 0.
double limiting_cgf(const FracParams& p, double theta);

// Search domain; endpoints may be +-inf and are probed strictly inside.
struct Interval {
    double lo;
    double hi;
};

/// Legendre-Fenchel value sup_{theta in domain} { theta x - f(theta) } for f
/// finite and convex on the domain. The maximizer is bracketed by the
/// derivative sign on a geometric theta-grid and refined by bisection on a
/// finite-difference derivative; +inf is returned when the objective still
/// grows at the domain edge. Throws std::invalid_argument if f is not finite
/// at a probed interior point (contract violation).
RateEvaluation legendre_conjugate(const std::function<double(double)>& f,
                                  double x, Interval domain);

// Rate function of the holding-time sample means. Closed forms at nu = 1 and
// nu = 1/2, numeric conjugation of the log-MGF otherwise; +inf for x <= 0.
RateEvaluation holding_mean_rate(const FracParams& p, double x);
// Same quantity, forced through the numeric conjugation path.
RateEvaluation holding_mean_rate_numeric(const FracParams& p, double x);

// Rate function of M(t)/t: x * holding_mean_rate(1/x) for x > 0,
// lambda 1_{nu=1} at x = 0, +inf for x < 0.
RateEvaluation count_rate(const FracParams& p, double x);
RateEvaluation count_rate_numeric(const FracParams& p, double x);

// Rate function of the weighted-Poisson version A(t)/t:
// nu x log(nu x / lambda^{1/nu}) - nu x + lambda^{1/nu} for x >= 0 (with
// 0 log 0 = 0), +inf for x < 0.
RateEvaluation weighted_poisson_rate(double nu, double lambda, double x);

// Rate of the nu = 1/2, h = 1 count built from its subordinated
// representation: inf_{y>0} { x log(x/(lambda y)) - x + lambda y + y^2/4 }
// for x > 0, 0 at x = 0, +inf for x < 0. The analytic minimizer
// y* = sqrt(lambda^2 + 2x) - lambda seeds a derivative bisection and is
// checked against it to 1e-9.
RateEvaluation composition_rate(double lambda, double x);

// |kappa(-Lambda(theta)) + theta|: forward-evaluated residual of the inverse
// relation between the holding-time log-MGF and the limiting CGF. Requires
// theta >= 0 when nu < 1 (std::domain_error otherwise).
double cgf_inverse_residual(const FracParams& p, double theta);

} // namespace fpp
