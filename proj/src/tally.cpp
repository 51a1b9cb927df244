#include "jrcr/tally.hpp"

#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

ExposureTally tally(const Cohort& cohort) {
  const StateSpaces& spaces = cohort.spaces;
  ExposureTally t;
  t.rcr_counts.assign(spaces.q_count(), 0);
  t.lm_trans_counts = Matrix(spaces.lm_count(), spaces.lm_count());
  t.lm_occupation.assign(spaces.lm_count(), 0.0);
  t.hs_trans_counts = Matrix(spaces.hs_count(), spaces.hs_count());
  t.hs_occupation.assign(spaces.hs_count(), 0.0);

  std::vector<std::string> violations;
  for (std::size_t i = 0; i < cohort.units.size(); ++i) {
    const auto bad = cohort.units[i].validate(spaces);
    for (const auto& b : bad)
      violations.push_back("unit " + std::to_string(i + 1) + ": " + b);
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  for (const auto& unit : cohort.units) {
    t.total_at_risk += unit.end_time;
    for (int q = 0; q < spaces.q_count(); ++q)
      t.rcr_counts[q] += static_cast<long long>(unit.rcr_times[q].size());

    double prev = 0.0;
    int state = spaces.lm_index(unit.lm_initial);
    for (const auto& tr : unit.lm_path) {
      t.lm_occupation[state] += tr.time - prev;
      t.lm_trans_counts(state, spaces.lm_index(tr.to)) += 1.0;
      prev = tr.time;
      state = spaces.lm_index(tr.to);
    }
    t.lm_occupation[state] += unit.end_time - prev;

    prev = 0.0;
    state = spaces.hs_index(unit.hs_initial);
    for (const auto& tr : unit.hs_path) {
      t.hs_occupation[state] += tr.time - prev;
      t.hs_trans_counts(state, spaces.hs_index(tr.to)) += 1.0;
      prev = tr.time;
      state = spaces.hs_index(tr.to);
    }
    // After absorption the unit is no longer at risk, so nothing accrues.
    if (unit.end_reason == EndReason::censored)
      t.hs_occupation[state] += unit.end_time - prev;
  }
  return t;
}

}  // namespace jrcr
