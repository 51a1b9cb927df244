#include "jrcr/model_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

double WeibullHazard::hazard(double t) const {
  if (t < 0.0) throw std::domain_error("Weibull hazard: negative time");
  if (shape == 1.0) return 1.0 / scale;
  return (shape / scale) * std::pow(t / scale, shape - 1.0);
}

double WeibullHazard::cumulative(double t) const { return std::pow(t / scale, shape); }

double baseline_cumulative(const Baseline& b, double t) {
  if (const auto* w = std::get_if<WeibullHazard>(&b)) return w->cumulative(t);
  return std::get<StepFunction>(b)(t);
}

namespace {
double own_log_count(const std::vector<int>& counts, int q) {
  return std::log1p(static_cast<double>(counts[q]));
}
void require_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("rho: alpha must be positive");
}
}  // namespace

double PowerLogRho::value(const std::vector<int>& counts, int q, double alpha) const {
  require_alpha(alpha);
  return std::exp(std::log(alpha) * own_log_count(counts, q));
}

double PowerLogRho::dlog(const std::vector<int>& counts, int q, double alpha) const {
  require_alpha(alpha);
  return own_log_count(counts, q) / alpha;
}

double PowerLogRho::d2log(const std::vector<int>& counts, int q, double alpha) const {
  require_alpha(alpha);
  return -own_log_count(counts, q) / (alpha * alpha);
}

const RhoFamily& power_log_rho() {
  static const PowerLogRho rho;
  return rho;
}

void validate_generator(const Matrix& g, int n, const char* name,
                        const std::vector<bool>& absorbing_rows) {
  if (g.rows() != n || g.cols() != n)
    throw ConfigError(std::string(name) + ": expected a " + std::to_string(n) + "x" +
                      std::to_string(n) + " matrix");
  for (int r = 0; r < n; ++r) {
    const bool absorbing = !absorbing_rows.empty() && absorbing_rows[r];
    double row_sum = 0.0;
    for (int c = 0; c < n; ++c) {
      row_sum += g(r, c);
      if (absorbing && g(r, c) != 0.0)
        throw ConfigError(std::string(name) + ": absorbing row " + std::to_string(r) +
                          " must be zero");
      if (r != c && g(r, c) < 0.0)
        throw ConfigError(std::string(name) + ": negative off-diagonal rate at (" +
                          std::to_string(r) + "," + std::to_string(c) + ")");
    }
    if (std::abs(row_sum) > 1e-12)
      throw ConfigError(std::string(name) + ": row " + std::to_string(r) +
                        " sums to " + std::to_string(row_sum) + ", expected 0");
  }
}

int theta_R_dim(const StateSpaces& spaces, int p) {
  return p + (spaces.hs_transient_count() - 1) + (spaces.lm_count() - 1);
}
int theta_W_dim(const StateSpaces& spaces, int p) {
  return p + (spaces.hs_transient_count() - 1) + spaces.q_count();
}
int theta_V_dim(const StateSpaces& spaces, int p) {
  return p + (spaces.lm_count() - 1) + spaces.q_count();
}

void ModelParams::validate(const StateSpaces& spaces, int p) const {
  const int q_count = spaces.q_count();
  if (static_cast<int>(baseline.size()) != q_count)
    throw ConfigError("params: need one baseline per recurrent-event type");
  if (static_cast<int>(alpha.size()) != q_count)
    throw ConfigError("params: need one alpha per recurrent-event type");
  for (double a : alpha)
    if (!(a > 0.0)) throw ConfigError("params: alpha must be positive");
  for (const auto& b : baseline) {
    if (const auto* w = std::get_if<WeibullHazard>(&b)) {
      if (!(w->shape > 0.0) || !(w->scale > 0.0))
        throw ConfigError("params: Weibull shape and scale must be positive");
    }
  }

  validate_generator(eta, spaces.lm_count(), "eta");
  std::vector<bool> absorbing(spaces.hs_count());
  for (int i = 0; i < spaces.hs_count(); ++i)
    absorbing[i] = spaces.is_absorbing(spaces.hs_states()[i]);
  validate_generator(xi, spaces.hs_count(), "xi", absorbing);

  auto check_dim = [](const std::vector<double>& v, int want, const char* name) {
    if (static_cast<int>(v.size()) != want)
      throw ConfigError(std::string("params: ") + name + " has dimension " +
                        std::to_string(v.size()) + ", expected " + std::to_string(want));
  };
  check_dim(theta_R, theta_R_dim(spaces, p), "theta_R");
  check_dim(theta_W, theta_W_dim(spaces, p), "theta_W");
  check_dim(theta_V, theta_V_dim(spaces, p), "theta_V");
}

bool ModelParams::is_special_case(double tol) const {
  for (const auto& b : baseline) {
    const auto* w = std::get_if<WeibullHazard>(&b);
    if (w == nullptr || std::abs(w->shape - 1.0) > tol) return false;
  }
  for (double a : alpha)
    if (std::abs(a - 1.0) > tol) return false;
  for (const auto* theta : {&theta_R, &theta_W, &theta_V})
    for (double v : *theta)
      if (std::abs(v) > tol) return false;
  return true;
}

}  // namespace jrcr
