#pragma once

#include <variant>

#include "jrcr/effective_age.hpp"
#include "jrcr/model_params.hpp"
#include "jrcr/state_spaces.hpp"
#include "jrcr/unit_history.hpp"

namespace jrcr {

struct RcrChannel {
  int q = 0;  // 0-based type index
};
struct LmChannel {
  int from = 0, to = 0;  // state labels
};
struct HsChannel {
  int from = 0, to = 0;  // state labels
};
using Channel = std::variant<RcrChannel, LmChannel, HsChannel>;

// Crude intensity of one channel at time s given the unit's history before s:
//   RCR q:      Y(s) lambda_0q[E_q(s)] rho_q[N^R(s-); alpha_q] exp{B^R(s-) theta^R}
//   LM (w1,w2): Y(s) 1{W(s-)=w1} eta(w1,w2) exp{B^W(s-) theta^W}
//   HS (v1,v):  Y(s) 1{V(s-)=v1} xi(v1,v)  exp{B^V(s-) theta^V}
// A channel out of an absorbing HS state is 0, not an error.
double intensity(const StateSpaces& spaces, const ModelParams& params, AgePolicy policy,
                 const RhoFamily& rho, const UnitHistory& unit, double s,
                 const Channel& channel);

}  // namespace jrcr
