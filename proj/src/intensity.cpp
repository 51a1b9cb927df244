#include "jrcr/intensity.hpp"

#include <cmath>
#include <stdexcept>

#include "jrcr/design.hpp"
#include "jrcr/linalg.hpp"

namespace jrcr {

double intensity(const StateSpaces& spaces, const ModelParams& params, AgePolicy policy,
                 const RhoFamily& rho, const UnitHistory& unit, double s,
                 const Channel& channel) {
  if (!unit.at_risk(s)) return 0.0;
  const StateSnapshot snap = snapshot_before(unit, s);

  if (const auto* rcr = std::get_if<RcrChannel>(&channel)) {
    if (rcr->q < 0 || rcr->q >= spaces.q_count())
      throw std::domain_error("intensity: recurrent-event type out of range");
    const double age = effective_age(policy, unit, rcr->q, s);
    const auto* weibull = std::get_if<WeibullHazard>(&params.baseline[rcr->q]);
    if (weibull == nullptr)
      throw std::domain_error("intensity: step baselines have no hazard density");
    const double hazard = weibull->hazard(age);
    const double link = std::exp(dot(design_row_R(spaces, snap, unit.covariates),
                                     params.theta_R));
    return hazard * rho.value(snap.rcr_counts, rcr->q, params.alpha[rcr->q]) * link;
  }

  if (const auto* lm = std::get_if<LmChannel>(&channel)) {
    const int from = spaces.lm_index(lm->from);
    const int to = spaces.lm_index(lm->to);
    if (from == to) throw std::domain_error("intensity: LM channel needs distinct states");
    if (snap.lm_state != lm->from) return 0.0;
    const double link = std::exp(dot(design_row_W(spaces, snap, unit.covariates),
                                     params.theta_W));
    return params.eta(from, to) * link;
  }

  const auto& hs = std::get<HsChannel>(channel);
  const int from = spaces.hs_index(hs.from);
  const int to = spaces.hs_index(hs.to);
  if (from == to) throw std::domain_error("intensity: HS channel needs distinct states");
  if (spaces.is_absorbing(hs.from)) return 0.0;
  if (snap.hs_state != hs.from) return 0.0;
  const double link = std::exp(dot(design_row_V(spaces, snap, unit.covariates),
                                   params.theta_V));
  return params.xi(from, to) * link;
}

}  // namespace jrcr
