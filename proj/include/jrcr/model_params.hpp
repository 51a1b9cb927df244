#pragma once

#include <variant>
#include <vector>

#include "jrcr/linalg.hpp"
#include "jrcr/state_spaces.hpp"
#include "jrcr/step_function.hpp"

namespace jrcr {

// Two-parameter Weibull baseline hazard (t/scale)^(shape-1) * shape/scale.
// shape == 1 is the constant-hazard special case with rate 1/scale.
struct WeibullHazard {
  double shape = 1.0;
  double scale = 1.0;
  double hazard(double t) const;
  double cumulative(double t) const;
  bool operator==(const WeibullHazard&) const = default;
};

// Either a parametric Weibull or an estimated step cumulative hazard.
using Baseline = std::variant<WeibullHazard, StepFunction>;

double baseline_cumulative(const Baseline& b, double t);

// Impact of accumulating event occurrences on the type-q intensity, with the
// derivatives of log rho in its scalar parameter needed by the profile fits.
class RhoFamily {
 public:
  virtual ~RhoFamily() = default;
  virtual double value(const std::vector<int>& counts, int q, double alpha) const = 0;
  virtual double dlog(const std::vector<int>& counts, int q, double alpha) const = 0;
  virtual double d2log(const std::vector<int>& counts, int q, double alpha) const = 0;
};

// rho_q(N; alpha) = alpha^log(1 + N_q), natural log, own-type count only.
class PowerLogRho final : public RhoFamily {
 public:
  double value(const std::vector<int>& counts, int q, double alpha) const override;
  double dlog(const std::vector<int>& counts, int q, double alpha) const override;
  double d2log(const std::vector<int>& counts, int q, double alpha) const override;
};

const RhoFamily& power_log_rho();

// The full parameter set: per-type baselines and rho parameters, the LM and
// HS generator matrices, and the three regression vectors.
struct ModelParams {
  std::vector<Baseline> baseline;  // per q
  std::vector<double> alpha;       // per q, > 0
  Matrix eta;                      // |W| x |W| generator, rows sum to 0
  Matrix xi;                       // |V| x |V| generator, absorbing rows zero
  std::vector<double> theta_R;     // [beta^R, gamma^R, kappa^R]
  std::vector<double> theta_W;     // [beta^W, gamma^W, nu^W]
  std::vector<double> theta_V;     // [beta^V, kappa^V, nu^V]

  // Throws ConfigError when dimensions or generator constraints are violated;
  // p is the covariate dimension.
  void validate(const StateSpaces& spaces, int p) const;

  // Special case: constant baselines, rho == 1, all thetas zero.
  bool is_special_case(double tol = 0.0) const;
};

// Coefficient dimensions implied by the design rows. HS states enter the
// design through dummies over the ordered transient set (the states a unit
// can occupy while at risk); including absorbing states would make the model
// unidentifiable against the baseline.
int theta_R_dim(const StateSpaces& spaces, int p);
int theta_W_dim(const StateSpaces& spaces, int p);
int theta_V_dim(const StateSpaces& spaces, int p);

// Generator-matrix validation shared by params and parsed inputs.
void validate_generator(const Matrix& g, int n, const char* name,
                        const std::vector<bool>& absorbing_rows = {});

}  // namespace jrcr
