#pragma once

#include <limits>
#include <vector>

#include "jrcr/event_grid.hpp"
#include "jrcr/fit_result.hpp"
#include "jrcr/optimizer.hpp"
#include "jrcr/step_function.hpp"

namespace jrcr {

// S_q^0R(t | alpha_q, theta_R) and its derivatives in (alpha_q, theta_R):
// the weighted count of unit-segments whose effective-age window contains t,
// with weights rho_q[N(seg); alpha] * exp(B^R(seg) theta) / age-slope.
struct S0R {
  double value = 0.0;
  double d_alpha = 0.0;
  double d2_alpha = 0.0;
  std::vector<double> d_theta;
  Matrix d2_theta;
  std::vector<double> d_alpha_theta;
};

S0R risk_set_S0R(const EventGrid& grid, int q, double t, double alpha_q,
                 const std::vector<double>& theta_R);

// NPMLE of the type-q baseline cumulative hazard given (alpha_q, theta_R):
// jumps dN(T_l)/S_q^0R(T_l) at the distinct event ages, 0/0 = 0.
StepFunction breslow_lambda(const EventGrid& grid, int q, double alpha_q,
                            const std::vector<double>& theta_R);

struct EtaXi {
  Matrix eta;  // |W| x |W| with diagonals = -row sums
  Matrix xi;   // |V| x |V|
};

// Occurrence-exposure rates given the regression coefficients: transition
// counts divided by the psi-weighted occupation exposures S^0W / S^0V.
EtaXi eta_xi_given_theta(const EventGrid& grid, const std::vector<double>& theta_W,
                         const std::vector<double>& theta_V);

// Profile log-likelihoods, analytic scores, and observed informations.
// R-profile parameters are laid out as [alpha_1, ..., alpha_Q, theta_R].
double profile_loglik_R(const EventGrid& grid, const std::vector<double>& alpha,
                        const std::vector<double>& theta_R);
std::vector<double> profile_score_R(const EventGrid& grid, const std::vector<double>& alpha,
                                    const std::vector<double>& theta_R);
Matrix profile_info_R(const EventGrid& grid, const std::vector<double>& alpha,
                      const std::vector<double>& theta_R);

double profile_loglik_W(const EventGrid& grid, const std::vector<double>& theta_W);
std::vector<double> profile_score_W(const EventGrid& grid,
                                    const std::vector<double>& theta_W);
Matrix profile_info_W(const EventGrid& grid, const std::vector<double>& theta_W);

double profile_loglik_V(const EventGrid& grid, const std::vector<double>& theta_V);
std::vector<double> profile_score_V(const EventGrid& grid,
                                    const std::vector<double>& theta_V);
Matrix profile_info_V(const EventGrid& grid, const std::vector<double>& theta_V);

struct SemiparamOptions {
  std::vector<double> lambda_times{0.3, 0.6, 0.9, 1.2};
  NewtonOptions newton;
  // Optional restriction to events observed by calendar time s_star with
  // effective age at most t_star; defaults use everything.
  double s_star = std::numeric_limits<double>::infinity();
  double t_star = std::numeric_limits<double>::infinity();
  const RhoFamily* rho = &power_log_rho();
};

// The full pipeline: three independent profile maximizations (alpha positivity
// enforced by an internal log-transform), plug-in Breslow baselines and
// occurrence-exposure generator estimates, observed-information standard
// errors, the plug-in covariance correction for eta/xi, and pointwise
// baseline-hazard variances (naive and with the plug-in term).
FitResult fit_semiparametric(const Cohort& cohort, AgePolicy policy,
                             const SemiparamOptions& options = {});

// Product-integral survivor curve of a step cumulative hazard. Jumps of size
// >= 1 truncate the curve to zero from that point on; `truncated` reports it.
StepFunction baseline_survivor(const StepFunction& cumulative_hazard,
                               bool* truncated = nullptr);

}  // namespace jrcr
