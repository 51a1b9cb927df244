#include "jrcr/state_spaces.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

namespace {

void require_distinct(const std::vector<int>& labels, const char* what) {
  std::set<int> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw ConfigError(std::string("state spaces: duplicate ") + what + " labels");
}

}  // namespace

StateSpaces::StateSpaces(std::vector<int> lm_states, std::vector<int> hs_states,
                         std::vector<int> hs_absorbing, int q_count)
    : lm_states_(std::move(lm_states)), hs_states_(std::move(hs_states)), q_count_(q_count) {
  if (q_count_ < 1) throw ConfigError("state spaces: need at least one recurrent-event type");
  if (lm_states_.size() < 2)
    throw ConfigError("state spaces: LM space needs at least two states");
  require_distinct(lm_states_, "LM");
  require_distinct(hs_states_, "HS");
  if (hs_absorbing.empty()) throw ConfigError("state spaces: absorbing HS set is empty");

  hs_absorbing_flag_.assign(hs_states_.size(), false);
  for (int label : hs_absorbing) {
    auto it = std::find(hs_states_.begin(), hs_states_.end(), label);
    if (it == hs_states_.end())
      throw ConfigError("state spaces: absorbing label " + std::to_string(label) +
                        " is not an HS state");
    hs_absorbing_flag_[it - hs_states_.begin()] = true;
  }
  for (std::size_t i = 0; i < hs_states_.size(); ++i)
    if (!hs_absorbing_flag_[i]) hs_transient_.push_back(hs_states_[i]);
  if (hs_transient_.empty())
    throw ConfigError("state spaces: every HS state is absorbing");
}

bool StateSpaces::is_absorbing(int hs_label) const {
  return hs_absorbing_flag_[hs_index(hs_label)];
}

namespace {
int index_of(const std::vector<int>& space, int label, const char* what) {
  auto it = std::find(space.begin(), space.end(), label);
  if (it == space.end())
    throw std::domain_error(std::string("state ") + std::to_string(label) + " not in " + what +
                            " space");
  return static_cast<int>(it - space.begin());
}
}  // namespace

int StateSpaces::lm_index(int label) const { return index_of(lm_states_, label, "LM"); }
int StateSpaces::hs_index(int label) const { return index_of(hs_states_, label, "HS"); }
int StateSpaces::hs_transient_index(int label) const {
  return index_of(hs_transient_, label, "transient HS");
}

std::vector<std::pair<int, int>> StateSpaces::lm_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int w1 : lm_states_)
    for (int w2 : lm_states_)
      if (w1 != w2) out.emplace_back(w1, w2);
  return out;
}

std::vector<std::pair<int, int>> StateSpaces::hs_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int v1 : hs_transient_)
    for (int v : hs_states_)
      if (v != v1) out.emplace_back(v1, v);
  return out;
}

std::vector<double> iota(const std::vector<int>& space, int state) {
  const int idx = index_of(space, state, "iota");
  std::vector<double> out(space.size() - 1, 0.0);
  if (idx > 0) out[idx - 1] = 1.0;
  return out;
}

}  // namespace jrcr
