#include "jrcr/parametric.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

namespace {

Estimate rate_estimate(std::string name, double count, double exposure) {
  Estimate e;
  e.name = std::move(name);
  if (count == 0.0) {
    e.value = 0.0;  // 0/0 convention; SE flagged unavailable
    return e;
  }
  e.value = count / exposure;
  e.se = e.value / std::sqrt(count);
  e.se_valid = true;
  return e;
}

}  // namespace

std::string eta_name(int from_label, int to_label) {
  return "eta(" + std::to_string(from_label) + "," + std::to_string(to_label) + ")";
}
std::string xi_name(int from_label, int to_label) {
  return "xi(" + std::to_string(from_label) + "," + std::to_string(to_label) + ")";
}

FitResult fit_special_case(const Cohort& cohort) {
  const StateSpaces& spaces = cohort.spaces;
  const ExposureTally t = tally(cohort);

  FitResult fit;
  fit.mode = FitMode::parametric;
  fit.spaces = spaces;
  fit.covariate_dim =
      cohort.units.empty() ? 0 : static_cast<int>(cohort.units[0].covariates.size());

  fit.lambda0_hat.resize(spaces.q_count());
  for (int q = 0; q < spaces.q_count(); ++q) {
    auto e = rate_estimate("lambda0_" + std::to_string(q + 1),
                           static_cast<double>(t.rcr_counts[q]), t.total_at_risk);
    fit.lambda0_hat[q] = e.value;
    fit.estimates.push_back(std::move(e));
  }

  fit.eta_hat = Matrix(spaces.lm_count(), spaces.lm_count());
  for (const auto& [w1, w2] : spaces.lm_pairs()) {
    const int r = spaces.lm_index(w1), c = spaces.lm_index(w2);
    auto e = rate_estimate(eta_name(w1, w2), t.lm_trans_counts(r, c), t.lm_occupation[r]);
    fit.eta_hat(r, c) = e.value;
    fit.eta_hat(r, r) -= e.value;
    fit.estimates.push_back(std::move(e));
  }

  fit.xi_hat = Matrix(spaces.hs_count(), spaces.hs_count());
  for (const auto& [v1, v] : spaces.hs_pairs()) {
    const int r = spaces.hs_index(v1), c = spaces.hs_index(v);
    auto e = rate_estimate(xi_name(v1, v), t.hs_trans_counts(r, c), t.hs_occupation[r]);
    fit.xi_hat(r, c) = e.value;
    fit.xi_hat(r, r) -= e.value;
    fit.estimates.push_back(std::move(e));
  }
  return fit;
}

double theoretical_info_rcr(double lambda_q, const Matrix& gamma11,
                            const std::vector<double>& p0, double censor_rate) {
  if (!(censor_rate > 0.0))
    throw std::domain_error("theoretical_info_rcr: censoring rate must be positive");
  if (!(lambda_q > 0.0))
    throw std::domain_error("theoretical_info_rcr: lambda must be positive");
  const int n = gamma11.rows();
  if (gamma11.cols() != n || static_cast<int>(p0.size()) != n)
    throw std::domain_error("theoretical_info_rcr: dimension mismatch");

  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      m(r, c) = (r == c ? 1.0 : 0.0) - gamma11(r, c) / censor_rate;

  std::vector<double> x;
  try {
    x = solve(m, std::vector<double>(n, 1.0));
  } catch (const NumericalError&) {
    // Resolvent series sum_k (Gamma11/nu)^k 1; converges when the spectral
    // radius of Gamma11/nu is below 1.
    x.assign(n, 1.0);
    std::vector<double> term(n, 1.0), next(n);
    for (int k = 1; k <= 100000; ++k) {
      double norm = 0.0;
      for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) acc += gamma11(r, c) / censor_rate * term[c];
        next[r] = acc;
        norm = std::max(norm, std::abs(acc));
      }
      term = next;
      for (int r = 0; r < n; ++r) x[r] += term[r];
      if (norm < 1e-14) break;
      if (k == 100000 || !std::isfinite(norm))
        throw NumericalError(
            "theoretical_info_rcr: resolvent series did not converge; spectral radius of "
            "Gamma11/nu is too close to 1");
    }
  }

  double acc = 0.0;
  for (int r = 0; r < n; ++r) acc += p0[r] * x[r];
  return acc / (lambda_q * censor_rate);
}

}  // namespace jrcr
