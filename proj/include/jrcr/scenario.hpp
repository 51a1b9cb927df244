#pragma once

#include <cstdint>
#include <vector>

#include "jrcr/effective_age.hpp"
#include "jrcr/model_params.hpp"
#include "jrcr/state_spaces.hpp"

namespace jrcr {

// Marginal law of one covariate coordinate.
struct CovariateSpec {
  enum class Kind { bernoulli, normal, constant };
  Kind kind = Kind::constant;
  double a = 0.0;  // bernoulli: success prob; normal: mean; constant: value
  double b = 1.0;  // normal: sd
  bool operator==(const CovariateSpec&) const = default;
};

// How per-interval event probabilities are formed in the grid scheme.
//   linear:         p = intensity * ds, error if any p >= 1
//   linear_clamped: p = min(intensity * ds, 1)
//   exp_interval:   p = 1 - exp(-intensity * ds), always a probability
enum class GridProbMode { linear, linear_clamped, exp_interval };

enum class GeneratorKind { grid, exact_special };

// Everything needed to generate a cohort: state spaces, true parameters,
// covariate/censoring/initial laws, the effective-age policy and rho family,
// grid resolution, horizon cap, and the seed.
struct Scenario {
  StateSpaces spaces;
  ModelParams params;
  std::vector<CovariateSpec> covariate_law;  // may be empty (p = 0)
  double censor_mean = 5.0;                  // tau ~ Exponential(mean)
  std::vector<double> lm_init_probs;         // empty -> uniform over W
  std::vector<double> hs_init_probs;         // empty -> uniform over transient V
  AgePolicy age_policy = AgePolicy::perfect_repair_own_type;
  const RhoFamily* rho = &power_log_rho();
  double ds = 0.001;
  double s_max = 50.0;
  GridProbMode grid_prob = GridProbMode::linear;
  std::uint64_t seed = 0;

  int covariate_dim() const { return static_cast<int>(covariate_law.size()); }

  void validate() const;

  // Hash of the full configuration including the seed.
  std::uint64_t fingerprint() const;
};

// The illustration scenario used by the replication studies: Q = 3 Weibull
// risks, three-state LM and HS spaces with HS state 1 absorbing, Bernoulli
// and standard-normal covariates, exponential censoring with mean 5.
Scenario illustration_scenario();

}  // namespace jrcr
