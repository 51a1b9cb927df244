#include "jrcr/effective_age.hpp"

#include <algorithm>
#include <stdexcept>

#include "jrcr/errors.hpp"

namespace jrcr {

namespace {

// Largest element of v that satisfies cmp(t); 0 when none.
template <typename Pred>
double last_time_where(const std::vector<double>& v, Pred pred) {
  for (auto it = v.rbegin(); it != v.rend(); ++it)
    if (pred(*it)) return *it;
  return 0.0;
}

double last_event_leq(const UnitHistory& unit, AgePolicy policy, int q, double s,
                      bool strict) {
  auto ok = [s, strict](double t) { return strict ? t < s : t <= s; };
  double latest = 0.0;
  switch (policy) {
    case AgePolicy::minimal_repair:
      return 0.0;
    case AgePolicy::perfect_repair_own_type:
      return last_time_where(unit.rcr_times[q], ok);
    case AgePolicy::perfect_repair_any_rcr:
      for (const auto& v : unit.rcr_times) latest = std::max(latest, last_time_where(v, ok));
      return latest;
    case AgePolicy::perfect_repair_any_event:
      for (const auto& v : unit.rcr_times) latest = std::max(latest, last_time_where(v, ok));
      for (const auto& tr : unit.lm_path)
        if (ok(tr.time)) latest = std::max(latest, tr.time);
      for (const auto& tr : unit.hs_path)
        if (ok(tr.time)) latest = std::max(latest, tr.time);
      return latest;
  }
  return 0.0;
}

}  // namespace

double effective_age(AgePolicy policy, const UnitHistory& unit, int q, double s) {
  if (!(s > 0.0)) throw std::domain_error("effective_age: s must be positive");
  return s - last_event_leq(unit, policy, q, s, /*strict=*/true);
}

double last_reset_time(AgePolicy policy, const UnitHistory& unit, int q, double s) {
  return last_event_leq(unit, policy, q, s, /*strict=*/false);
}

double effective_age_slope(AgePolicy, const UnitHistory&, int, double) { return 1.0; }

const char* age_policy_name(AgePolicy policy) {
  switch (policy) {
    case AgePolicy::minimal_repair: return "minimal-repair";
    case AgePolicy::perfect_repair_any_event: return "perfect-repair-any-event";
    case AgePolicy::perfect_repair_any_rcr: return "perfect-repair-any-rcr";
    case AgePolicy::perfect_repair_own_type: return "perfect-repair-own-type";
  }
  return "?";
}

AgePolicy age_policy_from_name(const std::string& name) {
  if (name == "minimal-repair") return AgePolicy::minimal_repair;
  if (name == "perfect-repair-any-event") return AgePolicy::perfect_repair_any_event;
  if (name == "perfect-repair-any-rcr") return AgePolicy::perfect_repair_any_rcr;
  if (name == "perfect-repair-own-type") return AgePolicy::perfect_repair_own_type;
  throw ConfigError("unknown age policy: " + name);
}

}  // namespace jrcr
