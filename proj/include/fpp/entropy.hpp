#pragma once

#include "fpp/extended_real.hpp"
#include "fpp/mittag_leffler.hpp"

namespace fpp {

// Relative entropy H(Q1 | Q2) between the weighted-Poisson laws with rates
// lambda1 and lambda2 at time t > 0, unnormalized (callers divide by t for
// the rate). lambda = 0 encodes the point mass at 0.
//
// Computed as the direct sum over k in log space; for lambda1, lambda2 > 0
// the closed finite-t form
//   log(lambda1/lambda2) * mean1 + log E_{nu,1}(lambda2 t^nu)
//                                - log E_{nu,1}(lambda1 t^nu)
// is evaluated alongside and the two are required to agree.
// +inf when lambda2 = 0 < lambda1; 0 when lambda1 = lambda2.
ExtendedReal relative_entropy(double nu, double lambda1, double lambda2,
                              double t, const SeriesOptions& opt = {});

// lim_{t->inf} H(...)/t in closed form:
//   lambda1^{1/nu} log(lambda1^{1/nu}/lambda2^{1/nu})
//     - lambda1^{1/nu} + lambda2^{1/nu},
// with 0 log 0 = 0; +inf when lambda2 = 0 < lambda1.
ExtendedReal relative_entropy_rate(double nu, double lambda1, double lambda2);

} // namespace fpp
