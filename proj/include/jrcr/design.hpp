#pragma once

#include <vector>

#include "jrcr/state_spaces.hpp"
#include "jrcr/unit_history.hpp"

namespace jrcr {

// Design rows multiplying theta^R / theta^W / theta^V in the intensities.
// All use left limits of the state processes; HS state dummies are coded over
// the ordered transient set.
//
//   B^R = [X, iota_V1(V(s-)), iota_W(W(s-))]
//   B^W = [X, iota_V1(V(s-)), N^R(s-)]
//   B^V = [X, iota_W(W(s-)), N^R(s-)]

std::vector<double> design_row_R(const StateSpaces& spaces, const StateSnapshot& snap,
                                 const std::vector<double>& covariates);
std::vector<double> design_row_W(const StateSpaces& spaces, const StateSnapshot& snap,
                                 const std::vector<double>& covariates);
std::vector<double> design_row_V(const StateSpaces& spaces, const StateSnapshot& snap,
                                 const std::vector<double>& covariates);

}  // namespace jrcr
