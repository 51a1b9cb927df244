#include "jrcr/scenario.hpp"

#include <cmath>
#include <cstring>

#include "jrcr/errors.hpp"

namespace jrcr {

namespace {

void validate_pmf(const std::vector<double>& probs, std::size_t want, const char* name) {
  if (probs.empty()) return;  // uniform default
  if (probs.size() != want)
    throw ConfigError(std::string(name) + ": need one probability per state");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ConfigError(std::string(name) + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError(std::string(name) + ": probabilities sum to " + std::to_string(sum));
}

void hash_u64(std::uint64_t& h, std::uint64_t v) {
  // FNV-1a over the 8 bytes.
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ULL;
  }
}

void hash_double(std::uint64_t& h, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  hash_u64(h, bits);
}

void hash_vec(std::uint64_t& h, const std::vector<double>& v) {
  hash_u64(h, v.size());
  for (double d : v) hash_double(h, d);
}

}  // namespace

void Scenario::validate() const {
  params.validate(spaces, covariate_dim());
  if (!(ds > 0.0)) throw ConfigError("scenario: ds must be positive");
  if (!(s_max >= 0.0)) throw ConfigError("scenario: s_max must be non-negative");
  if (!(censor_mean > 0.0)) throw ConfigError("scenario: censoring mean must be positive");
  validate_pmf(lm_init_probs, spaces.lm_states().size(), "initial LM law");
  validate_pmf(hs_init_probs, spaces.hs_transient().size(), "initial HS law");
  for (const auto& c : covariate_law) {
    if (c.kind == CovariateSpec::Kind::bernoulli && (c.a < 0.0 || c.a > 1.0))
      throw ConfigError("scenario: Bernoulli covariate probability outside [0,1]");
    if (c.kind == CovariateSpec::Kind::normal && !(c.b >= 0.0))
      throw ConfigError("scenario: normal covariate sd must be non-negative");
  }
}

std::uint64_t Scenario::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (int s : spaces.lm_states()) hash_u64(h, static_cast<std::uint64_t>(s));
  for (int s : spaces.hs_states()) hash_u64(h, static_cast<std::uint64_t>(s));
  for (int s : spaces.hs_transient()) hash_u64(h, static_cast<std::uint64_t>(s));
  hash_u64(h, spaces.q_count());
  for (const auto& b : params.baseline) {
    if (const auto* w = std::get_if<WeibullHazard>(&b)) {
      hash_double(h, w->shape);
      hash_double(h, w->scale);
    } else {
      const auto& sf = std::get<StepFunction>(b);
      hash_vec(h, sf.jump_times());
      hash_vec(h, sf.jump_sizes());
    }
  }
  hash_vec(h, params.alpha);
  for (int r = 0; r < params.eta.rows(); ++r)
    for (int c = 0; c < params.eta.cols(); ++c) hash_double(h, params.eta(r, c));
  for (int r = 0; r < params.xi.rows(); ++r)
    for (int c = 0; c < params.xi.cols(); ++c) hash_double(h, params.xi(r, c));
  hash_vec(h, params.theta_R);
  hash_vec(h, params.theta_W);
  hash_vec(h, params.theta_V);
  for (const auto& c : covariate_law) {
    hash_u64(h, static_cast<std::uint64_t>(c.kind));
    hash_double(h, c.a);
    hash_double(h, c.b);
  }
  hash_double(h, censor_mean);
  hash_vec(h, lm_init_probs);
  hash_vec(h, hs_init_probs);
  hash_u64(h, static_cast<std::uint64_t>(age_policy));
  hash_double(h, ds);
  hash_double(h, s_max);
  hash_u64(h, static_cast<std::uint64_t>(grid_prob));
  hash_u64(h, seed);
  return h;
}

Scenario illustration_scenario() {
  Scenario sc;
  sc.spaces = StateSpaces({1, 2, 3}, {1, 2, 3}, {1}, 3);

  ModelParams p;
  p.baseline = {WeibullHazard{2.0, 0.9}, WeibullHazard{2.0, 1.0}, WeibullHazard{3.0, 1.1}};
  p.alpha = {1.5, 1.2, 2.0};
  p.eta = Matrix(3, 3);
  const double eta_rows[3][3] = {{-0.3, 0.2, 0.1}, {0.1, -0.2, 0.1}, {0.1, 0.2, -0.3}};
  const double xi_rows[3][3] = {{0.0, 0.0, 0.0}, {0.2, -0.7, 0.5}, {0.05, 0.5, -0.55}};
  p.xi = Matrix(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      p.eta(r, c) = eta_rows[r][c];
      p.xi(r, c) = xi_rows[r][c];
    }
  p.theta_R = {1.0, -1.0, 1.0, 1.0, -1.0};             // beta, gamma_1, kappa_1..2
  p.theta_W = {1.0, -1.0, 1.0, 1.0, 1.0, -2.0};        // beta, gamma_1, nu_1..3
  p.theta_V = {1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -2.0};  // beta, kappa_1..2, nu_1..3
  sc.params = std::move(p);

  sc.covariate_law = {{CovariateSpec::Kind::bernoulli, 0.5, 0.0},
                      {CovariateSpec::Kind::normal, 0.0, 1.0}};
  sc.censor_mean = 5.0;
  sc.age_policy = AgePolicy::perfect_repair_own_type;
  sc.ds = 0.001;
  sc.s_max = 50.0;
  return sc;
}

}  // namespace jrcr
