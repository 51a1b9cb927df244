#include "jrcr/design.hpp"

#include <stdexcept>

namespace jrcr {

namespace {

void append(std::vector<double>& row, const std::vector<double>& tail) {
  row.insert(row.end(), tail.begin(), tail.end());
}

void append_counts(std::vector<double>& row, const std::vector<int>& counts) {
  for (int c : counts) row.push_back(static_cast<double>(c));
}

// LM dummies: indicator of `state` against all but the last element, so the
// last LM state is the reference level.
std::vector<double> iota_lm(const std::vector<int>& space, int state) {
  std::vector<double> out(space.size() - 1, 0.0);
  bool found = false;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space[i] == state) {
      if (i + 1 < space.size()) out[i] = 1.0;
      found = true;
    }
  }
  if (!found) throw std::domain_error("design row: LM state not in space");
  return out;
}

// HS dummies: over the ordered transient states, first as reference level.
std::vector<double> iota_hs(const StateSpaces& spaces, int state) {
  return iota(spaces.hs_transient(), state);
}

}  // namespace

std::vector<double> design_row_R(const StateSpaces& spaces, const StateSnapshot& snap,
                                 const std::vector<double>& covariates) {
  std::vector<double> row = covariates;
  append(row, iota_hs(spaces, snap.hs_state));
  append(row, iota_lm(spaces.lm_states(), snap.lm_state));
  return row;
}

std::vector<double> design_row_W(const StateSpaces& spaces, const StateSnapshot& snap,
                                 const std::vector<double>& covariates) {
  if (static_cast<int>(snap.rcr_counts.size()) != spaces.q_count())
    throw std::domain_error("design_row_W: count vector length != Q");
  std::vector<double> row = covariates;
  append(row, iota_hs(spaces, snap.hs_state));
  append_counts(row, snap.rcr_counts);
  return row;
}

std::vector<double> design_row_V(const StateSpaces& spaces, const StateSnapshot& snap,
                                 const std::vector<double>& covariates) {
  if (static_cast<int>(snap.rcr_counts.size()) != spaces.q_count())
    throw std::domain_error("design_row_V: count vector length != Q");
  std::vector<double> row = covariates;
  append(row, iota_lm(spaces.lm_states(), snap.lm_state));
  append_counts(row, snap.rcr_counts);
  return row;
}

}  // namespace jrcr
