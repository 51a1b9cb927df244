#pragma once

#include "jrcr/unit_history.hpp"

namespace jrcr {

// Built-in effective-age processes. All are left-continuous and piecewise
// linear with slope 1 between resets; they differ in which events reset the
// age to zero.
enum class AgePolicy {
  minimal_repair,           // age == calendar time, nothing resets
  perfect_repair_any_event, // any RCR/LM/HS event resets
  perfect_repair_any_rcr,   // any recurrent event resets
  perfect_repair_own_type,  // only type-q events reset the type-q age
};

// Effective age of type q at time s, computed from events strictly before s.
// Throws std::domain_error for s <= 0.
double effective_age(AgePolicy policy, const UnitHistory& unit, int q, double s);

// Time of the most recent reset at or before s (resets caused by events in
// [0, s]); 0 when none. The age valid on the interval just after s is
// t - last_reset_time(..., s) for t in (s, next event].
double last_reset_time(AgePolicy policy, const UnitHistory& unit, int q, double s);

// d/ds of the effective age; identically 1 for every built-in policy. The
// risk-set weights divide by this slope, so it is kept explicit.
double effective_age_slope(AgePolicy policy, const UnitHistory& unit, int q, double s);

const char* age_policy_name(AgePolicy policy);
AgePolicy age_policy_from_name(const std::string& name);

}  // namespace jrcr
