#pragma once

#include "jrcr/fit_result.hpp"
#include "jrcr/tally.hpp"

namespace jrcr {

// Closed-form maximum likelihood for the Poisson/CTMC special case: every
// rate is an occurrence-exposure ratio, with the 0/0 = 0 convention, and the
// standard errors come from the diagonal observed information,
// SE(rate) = rate / sqrt(count). Channels with zero events get estimate 0 and
// a flagged (non-numeric) standard error.
FitResult fit_special_case(const Cohort& cohort);

// Theoretical Fisher information for one lambda_0q under exponential
// censoring with rate nu: (1/lambda)(1/nu) p0' (I - Gamma11/nu)^-1 1, where
// Gamma11 is the HS generator restricted to the transient states and p0 the
// initial distribution over them. Solved by LU; falls back to summing the
// series sum_k (Gamma11/nu)^k when the system is ill-conditioned.
double theoretical_info_rcr(double lambda_q, const Matrix& gamma11,
                            const std::vector<double>& p0, double censor_rate);

}  // namespace jrcr
