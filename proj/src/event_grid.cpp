#include "jrcr/event_grid.hpp"

#include <algorithm>

#include "jrcr/errors.hpp"

namespace jrcr {

int EventGrid::dim_R() const { return theta_R_dim(spaces, covariate_dim); }
int EventGrid::dim_W() const { return theta_W_dim(spaces, covariate_dim); }
int EventGrid::dim_V() const { return theta_V_dim(spaces, covariate_dim); }

namespace {

// Emits the segment (left, right] for the state held in `snap`.
Segment make_segment(const EventGrid& grid, const UnitHistory& unit, int unit_index,
                     double left, double right, const StateSnapshot& snap,
                     const std::vector<double>& reset) {
  const int q_count = grid.spaces.q_count();
  Segment seg;
  seg.unit = unit_index;
  seg.left = left;
  seg.right = right;
  seg.lm_state = snap.lm_state;
  seg.hs_state = snap.hs_state;
  seg.counts = snap.rcr_counts;
  seg.row_R = design_row_R(grid.spaces, snap, unit.covariates);
  seg.row_W = design_row_W(grid.spaces, snap, unit.covariates);
  seg.row_V = design_row_V(grid.spaces, snap, unit.covariates);
  seg.age_left.resize(q_count);
  seg.age_right.resize(q_count);
  for (int q = 0; q < q_count; ++q) {
    seg.age_left[q] = left - reset[q];
    seg.age_right[q] = right - reset[q];
  }
  return seg;
}

}  // namespace

EventGrid build_grid(const Cohort& cohort, AgePolicy policy, const RhoFamily& rho) {
  EventGrid grid;
  grid.spaces = cohort.spaces;
  grid.policy = policy;
  grid.rho = &rho;
  grid.n_units = static_cast<int>(cohort.units.size());
  grid.covariate_dim =
      cohort.units.empty() ? 0 : static_cast<int>(cohort.units[0].covariates.size());
  const int q_count = grid.spaces.q_count();

  std::vector<double> pooled;
  for (const auto& unit : cohort.units) {
    const auto times = unit.all_event_times();
    pooled.insert(pooled.end(), times.begin(), times.end());
  }
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  grid.calendar_times = pooled;

  grid.rcr_event_idx.resize(q_count);
  grid.lm_event_idx_from.resize(grid.spaces.lm_count());
  grid.hs_event_idx_from.resize(grid.spaces.hs_count());
  grid.age_times.resize(q_count);

  for (int i = 0; i < grid.n_units; ++i) {
    const UnitHistory& unit = cohort.units[i];
    const double end = unit.end_time;

    StateSnapshot snap;
    snap.lm_state = unit.lm_initial;
    snap.hs_state = unit.hs_initial;
    snap.rcr_counts.assign(q_count, 0);
    std::vector<double> reset(q_count, 0.0);
    std::vector<std::size_t> rcr_cursor(q_count, 0);
    std::size_t lm_cursor = 0, hs_cursor = 0;

    double left = 0.0;
    bool done = false;
    for (double s : grid.calendar_times) {
      if (s > end || done) break;
      const double right = s;  // s <= end here, and s > left always
      Segment seg = make_segment(grid, unit, i, left, right, snap, reset);
      for (int q = 0; q < q_count; ++q) grid.age_times[q].push_back(seg.age_right[q]);
      const int seg_index = static_cast<int>(grid.segments.size());

      // This unit's events at s, if any (at most one by the invariants).
      for (int q = 0; q < q_count; ++q) {
        if (rcr_cursor[q] < unit.rcr_times[q].size() &&
            unit.rcr_times[q][rcr_cursor[q]] == s) {
          GridEvent ev;
          ev.unit = i;
          ev.time = s;
          ev.kind = EventKind::rcr;
          ev.q = q;
          ev.segment = seg_index;
          ev.age = seg.age_right[q];
          grid.rcr_event_idx[q].push_back(static_cast<int>(grid.events.size()));
          grid.events.push_back(ev);
          ++rcr_cursor[q];
          ++snap.rcr_counts[q];
        }
      }
      if (lm_cursor < unit.lm_path.size() && unit.lm_path[lm_cursor].time == s) {
        const Transition& tr = unit.lm_path[lm_cursor];
        GridEvent ev;
        ev.unit = i;
        ev.time = s;
        ev.kind = EventKind::lm;
        ev.from = tr.from;
        ev.to = tr.to;
        ev.segment = seg_index;
        grid.lm_event_idx_from[grid.spaces.lm_index(tr.from)].push_back(
            static_cast<int>(grid.events.size()));
        grid.events.push_back(ev);
        snap.lm_state = tr.to;
        ++lm_cursor;
      }
      if (hs_cursor < unit.hs_path.size() && unit.hs_path[hs_cursor].time == s) {
        const Transition& tr = unit.hs_path[hs_cursor];
        GridEvent ev;
        ev.unit = i;
        ev.time = s;
        ev.kind = EventKind::hs;
        ev.from = tr.from;
        ev.to = tr.to;
        ev.segment = seg_index;
        grid.hs_event_idx_from[grid.spaces.hs_index(tr.from)].push_back(
            static_cast<int>(grid.events.size()));
        grid.events.push_back(ev);
        snap.hs_state = tr.to;
        ++hs_cursor;
      }
      for (int q = 0; q < q_count; ++q) reset[q] = last_reset_time(policy, unit, q, s);

      grid.segments.push_back(std::move(seg));
      left = right;
      if (left >= end) done = true;
    }
    if (!done && left < end) {
      Segment seg = make_segment(grid, unit, i, left, end, snap, reset);
      for (int q = 0; q < q_count; ++q) grid.age_times[q].push_back(seg.age_right[q]);
      grid.segments.push_back(std::move(seg));
    }
  }

  for (auto& ages : grid.age_times) {
    std::sort(ages.begin(), ages.end());
    ages.erase(std::unique(ages.begin(), ages.end()), ages.end());
  }
  return grid;
}

}  // namespace jrcr
