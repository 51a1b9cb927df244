#pragma once

#include <vector>

#include "jrcr/linalg.hpp"
#include "jrcr/simulate.hpp"

namespace jrcr {

// Event counts and integrated at-risk exposures per channel, pooled over the
// cohort. Occupation times are exact piecewise-constant integrals from the
// transition records, including the stretch after the last event up to the
// end of monitoring.
struct ExposureTally {
  std::vector<long long> rcr_counts;  // per q
  double total_at_risk = 0.0;         // sum of end times
  Matrix lm_trans_counts;             // |W| x |W|, off-diagonal counts
  std::vector<double> lm_occupation;  // per LM state, declared order
  Matrix hs_trans_counts;             // |V| x |V|
  std::vector<double> hs_occupation;  // per HS state; absorbing entries 0
};

// Throws ValidationError when a unit violates the history invariants.
ExposureTally tally(const Cohort& cohort);

}  // namespace jrcr
