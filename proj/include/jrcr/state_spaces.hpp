#pragma once

#include <utility>
#include <vector>

namespace jrcr {

// Ordered finite state spaces for the longitudinal-marker (LM) process, the
// health-status (HS) process with its absorbing subset, and the number of
// recurrent-event types Q. States are integer labels; order matters because
// dummy coding drops the first element of each ordered set.
class StateSpaces {
 public:
  StateSpaces() = default;
  // Throws ConfigError on duplicate labels, empty absorbing set, no transient
  // state, fewer than two LM states, or Q < 1.
  StateSpaces(std::vector<int> lm_states, std::vector<int> hs_states,
              std::vector<int> hs_absorbing, int q_count);

  const std::vector<int>& lm_states() const { return lm_states_; }
  const std::vector<int>& hs_states() const { return hs_states_; }
  const std::vector<int>& hs_transient() const { return hs_transient_; }
  int q_count() const { return q_count_; }

  int lm_count() const { return static_cast<int>(lm_states_.size()); }
  int hs_count() const { return static_cast<int>(hs_states_.size()); }
  int hs_transient_count() const { return static_cast<int>(hs_transient_.size()); }

  bool is_absorbing(int hs_label) const;

  // Label -> position in the declared order; throws std::domain_error if absent.
  int lm_index(int label) const;
  int hs_index(int label) const;
  // Position of a transient HS label within the ordered transient subset.
  int hs_transient_index(int label) const;

  // Index set over ordered pairs (w1, w2), w1 != w2, in declared order.
  std::vector<std::pair<int, int>> lm_pairs() const;
  // Index set over pairs (v1, v), v1 transient, v != v1.
  std::vector<std::pair<int, int>> hs_pairs() const;

  bool operator==(const StateSpaces&) const = default;

 private:
  std::vector<int> lm_states_, hs_states_, hs_transient_;
  std::vector<bool> hs_absorbing_flag_;
  int q_count_ = 0;
};

// Dummy-variable converter: indicator of `state` against every element of the
// ordered `space` except the first. The first element maps to all zeros.
std::vector<double> iota(const std::vector<int>& space, int state);

}  // namespace jrcr
