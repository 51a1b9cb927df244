#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jrcr/linalg.hpp"
#include "jrcr/state_spaces.hpp"
#include "jrcr/step_function.hpp"

namespace jrcr {

enum class FitMode { parametric, semiparametric };

struct NewtonDiagnostics {
  int iterations = 0;
  bool converged = true;
  double grad_norm = 0.0;
  double loglik = 0.0;
  bool skipped = false;  // block dropped (no events) or empty parameter
};

// One named estimate with its standard error. `se_valid` is false for
// channels with no observed events, where the information is undefined.
struct Estimate {
  std::string name;
  double value = 0.0;
  double se = std::numeric_limits<double>::quiet_NaN();
  bool se_valid = false;
  double null_value = 0.0;  // Wald tests are against this (1 for alpha)
};

struct FitResult {
  FitMode mode = FitMode::parametric;
  StateSpaces spaces;
  int covariate_dim = 0;

  std::vector<Estimate> estimates;  // everything named, in report order

  // Structured access (mirrors entries in `estimates`).
  std::vector<double> lambda0_hat;  // parametric mode: constant rates
  std::vector<double> alpha_hat;    // semiparametric mode
  std::vector<double> theta_R, theta_W, theta_V;
  Matrix eta_hat, xi_hat;  // full matrices with diagonals = -row sums

  // Semiparametric eta/xi standard errors: the default reported in
  // `estimates` includes the plug-in covariance from theta-hat; the plain
  // occurrence-exposure variant rate/sqrt(count) is kept as the alternative.
  Matrix eta_se_plain, xi_se_plain;

  // Semiparametric extras.
  std::vector<StepFunction> lambda_hat;  // per q, cumulative hazard vs age
  std::vector<double> lambda_eval_times;
  Matrix lambda_se_naive;  // q x times: sqrt(sum dN/S^2)
  Matrix lambda_se_full;   // q x times: adds the plug-in covariance term
  NewtonDiagnostics diag_R, diag_W, diag_V;

  bool converged() const {
    return (diag_R.converged || diag_R.skipped) && (diag_W.converged || diag_W.skipped) &&
           (diag_V.converged || diag_V.skipped);
  }

  const Estimate* find(const std::string& name) const {
    for (const auto& e : estimates)
      if (e.name == name) return &e;
    return nullptr;
  }
};

// Canonical estimate names: alpha_1, beta_R_1, gamma_R_1, kappa_R_1, nu_W_1,
// eta(2,1), xi(2,3), lambda0_1, Lambda0_1(0.6), ...
std::vector<std::string> theta_R_names(const StateSpaces& spaces, int p);
std::vector<std::string> theta_W_names(const StateSpaces& spaces, int p);
std::vector<std::string> theta_V_names(const StateSpaces& spaces, int p);
std::string eta_name(int from_label, int to_label);
std::string xi_name(int from_label, int to_label);

}  // namespace jrcr
