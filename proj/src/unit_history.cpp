#include "jrcr/unit_history.hpp"

#include <algorithm>
#include <cmath>

namespace jrcr {

namespace {
int state_before(int initial, const std::vector<Transition>& path, double t) {
  int state = initial;
  for (const auto& tr : path) {
    if (tr.time < t)
      state = tr.to;
    else
      break;
  }
  return state;
}
}  // namespace

int UnitHistory::lm_state_before(double t) const { return state_before(lm_initial, lm_path, t); }
int UnitHistory::hs_state_before(double t) const { return state_before(hs_initial, hs_path, t); }

std::vector<int> UnitHistory::rcr_counts_before(double t) const {
  std::vector<int> counts(rcr_times.size(), 0);
  for (std::size_t q = 0; q < rcr_times.size(); ++q)
    counts[q] = static_cast<int>(
        std::lower_bound(rcr_times[q].begin(), rcr_times[q].end(), t) - rcr_times[q].begin());
  return counts;
}

std::vector<double> UnitHistory::all_event_times() const {
  std::vector<double> times;
  for (const auto& v : rcr_times) times.insert(times.end(), v.begin(), v.end());
  for (const auto& tr : lm_path) times.push_back(tr.time);
  for (const auto& tr : hs_path) times.push_back(tr.time);
  std::sort(times.begin(), times.end());
  return times;
}

std::vector<std::string> UnitHistory::validate(const StateSpaces& spaces) const {
  std::vector<std::string> bad;
  auto complain = [&bad](const std::string& s) { bad.push_back(s); };

  if (static_cast<int>(rcr_times.size()) != spaces.q_count())
    complain("rcr_times has " + std::to_string(rcr_times.size()) + " types, expected Q=" +
             std::to_string(spaces.q_count()));
  if (!(end_time > 0.0) || !std::isfinite(end_time))
    complain("end_time must be positive and finite");

  const auto times = all_event_times();
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i - 1] < times[i]))
      complain("simultaneous events at t=" + std::to_string(times[i]));
  for (double t : times)
    if (!(t > 0.0) || t > end_time)
      complain("event time " + std::to_string(t) + " outside (0, end_time]");

  for (const auto& v : rcr_times)
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i - 1] < v[i])) complain("recurrent event times not strictly increasing");

  auto check_chain = [&](int initial, const std::vector<Transition>& path, const char* name,
                         bool hs) {
    int state = initial;
    for (const auto& tr : path) {
      if (tr.from != state)
        complain(std::string(name) + " transition at t=" + std::to_string(tr.time) +
                 " starts from " + std::to_string(tr.from) + ", chain is at " +
                 std::to_string(state));
      if (tr.from == tr.to)
        complain(std::string(name) + " self-transition at t=" + std::to_string(tr.time));
      if (hs && spaces.is_absorbing(tr.from))
        complain("HS transition out of absorbing state " + std::to_string(tr.from));
      state = tr.to;
    }
  };
  try {
    spaces.lm_index(lm_initial);
    for (const auto& tr : lm_path) {
      spaces.lm_index(tr.from);
      spaces.lm_index(tr.to);
    }
    spaces.hs_index(hs_initial);
    if (spaces.is_absorbing(hs_initial)) complain("initial HS state is absorbing");
    for (const auto& tr : hs_path) {
      spaces.hs_index(tr.from);
      spaces.hs_index(tr.to);
    }
    check_chain(lm_initial, lm_path, "LM", false);
    check_chain(hs_initial, hs_path, "HS", true);
  } catch (const std::domain_error& e) {
    complain(e.what());
  }

  if (end_reason == EndReason::absorbed) {
    if (hs_path.empty() || !spaces.is_absorbing(hs_path.back().to))
      complain("absorbed unit does not end in an absorbing HS state");
    else if (hs_path.back().time != end_time)
      complain("absorption time differs from end_time");
  } else if (!hs_path.empty() && spaces.is_absorbing(hs_path.back().to)) {
    complain("censored unit has an absorbing transition");
  }
  return bad;
}

StateSnapshot snapshot_before(const UnitHistory& unit, double s) {
  StateSnapshot snap;
  snap.time = s;
  snap.lm_state = unit.lm_state_before(s);
  snap.hs_state = unit.hs_state_before(s);
  snap.rcr_counts = unit.rcr_counts_before(s);
  snap.at_risk = unit.at_risk(s);
  return snap;
}

}  // namespace jrcr
