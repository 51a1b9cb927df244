#pragma once

#include <vector>

#include "jrcr/design.hpp"
#include "jrcr/effective_age.hpp"
#include "jrcr/model_params.hpp"
#include "jrcr/simulate.hpp"

namespace jrcr {

// One maximal interval (left, right] of calendar time for one unit on which
// every covariate process is constant: the grid times are the pooled event
// times of the whole cohort, so no unit has events strictly inside a segment.
struct Segment {
  int unit = 0;
  double left = 0.0, right = 0.0;
  int lm_state = 0, hs_state = 0;    // labels of W(s-), V(s-) on the segment
  std::vector<int> counts;           // N^R(s-), per type
  std::vector<double> row_R, row_W, row_V;
  // Effective-age window (age_left[q], age_right[q]] swept over the segment;
  // the built-in policies are linear with slope 1 between resets, so the
  // window is an interval.
  std::vector<double> age_left, age_right;

  double duration() const { return right - left; }
};

enum class EventKind { rcr, lm, hs };

// One observed jump, tied to the segment whose right endpoint it is.
struct GridEvent {
  int unit = 0;
  double time = 0.0;
  EventKind kind = EventKind::rcr;
  int q = -1;                 // rcr
  int from = 0, to = 0;       // lm/hs state labels
  int segment = -1;           // index into EventGrid::segments
  double age = 0.0;           // effective age at the event (rcr only)
};

// The calendar grid S_1 < ... < S_K (distinct pooled event times), the per-q
// age grids, the per-unit segments with cached design rows, and the events.
struct EventGrid {
  StateSpaces spaces;
  AgePolicy policy = AgePolicy::perfect_repair_own_type;
  const RhoFamily* rho = &power_log_rho();
  int covariate_dim = 0;
  int n_units = 0;

  std::vector<double> calendar_times;
  std::vector<std::vector<double>> age_times;  // per q, distinct attained ages

  std::vector<Segment> segments;
  std::vector<GridEvent> events;  // chronological

  std::vector<std::vector<int>> rcr_event_idx;      // per q -> event indices
  std::vector<std::vector<int>> lm_event_idx_from;  // per LM state index
  std::vector<std::vector<int>> hs_event_idx_from;  // per HS state index

  int dim_R() const;  // dim(theta_R)
  int dim_W() const;
  int dim_V() const;
};

EventGrid build_grid(const Cohort& cohort, AgePolicy policy,
                     const RhoFamily& rho = power_log_rho());

}  // namespace jrcr
