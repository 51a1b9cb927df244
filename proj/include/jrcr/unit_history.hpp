#pragma once

#include <string>
#include <vector>

#include "jrcr/state_spaces.hpp"

namespace jrcr {

enum class EndReason { censored, absorbed };

struct Transition {
  double time = 0.0;
  int from = 0;  // state labels
  int to = 0;
  bool operator==(const Transition&) const = default;
};

// Everything observed for one unit: covariates, the per-type recurrent event
// times, the LM and HS transition records, and the end of monitoring.
struct UnitHistory {
  std::vector<double> covariates;
  int lm_initial = 0;
  int hs_initial = 0;
  std::vector<std::vector<double>> rcr_times;  // per type q, strictly increasing
  std::vector<Transition> lm_path;
  std::vector<Transition> hs_path;
  double end_time = 0.0;  // tau* = min(tau, tau_A)
  EndReason end_reason = EndReason::censored;

  bool operator==(const UnitHistory&) const = default;

  // State of the LM/HS process just before time t (left limit).
  int lm_state_before(double t) const;
  int hs_state_before(double t) const;
  // Recurrent-event counts N^R(t-), per type.
  std::vector<int> rcr_counts_before(double t) const;
  bool at_risk(double t) const { return t <= end_time; }

  // All event times (RCR, LM, HS) merged and sorted ascending.
  std::vector<double> all_event_times() const;

  // Invariant checks; returns human-readable violations, empty when valid.
  std::vector<std::string> validate(const StateSpaces& spaces) const;
};

// Time s, states and counts just before s, and the at-risk indicator.
struct StateSnapshot {
  double time = 0.0;
  int lm_state = 0;
  int hs_state = 0;
  std::vector<int> rcr_counts;
  bool at_risk = false;
};

StateSnapshot snapshot_before(const UnitHistory& unit, double s);

}  // namespace jrcr
