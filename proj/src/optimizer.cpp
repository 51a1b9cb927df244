#include "jrcr/optimizer.hpp"

#include <cmath>
#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

namespace {
double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

NewtonResult newton_raphson(const Objective& objective, std::vector<double> init,
                            const NewtonOptions& options) {
  NewtonResult res;
  res.x = std::move(init);
  if (objective.dim == 0) {
    res.diag.converged = true;
    res.diag.skipped = true;
    return res;
  }

  double value = objective.value(res.x);
  std::vector<double> score(objective.dim);
  Matrix info(objective.dim, objective.dim);

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    objective.score_info(res.x, score, info);
    res.diag.grad_norm = sup_norm(score);
    res.diag.iterations = iter - 1;
    if (res.diag.grad_norm < options.tol) {
      res.diag.converged = true;
      res.diag.loglik = value;
      return res;
    }

    std::vector<double> step;
    try {
      step = solve(info, score);
    } catch (const NumericalError&) {
      std::string spectrum;
      for (double ev : sym_eigenvalues(info)) spectrum += " " + std::to_string(ev);
      throw NumericalError("newton_raphson: singular information matrix; eigenvalues:" +
                           spectrum);
    }

    double scale = 1.0;
    bool improved = false;
    std::vector<double> trial(objective.dim);
    for (int h = 0; h <= options.max_halvings; ++h) {
      for (int d = 0; d < objective.dim; ++d) trial[d] = res.x[d] + scale * step[d];
      const double trial_value = objective.value(trial);
      if (std::isfinite(trial_value) && trial_value > value - 1e-14 * std::abs(value)) {
        res.x = trial;
        value = trial_value;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) {
      res.diag.converged = false;
      res.diag.loglik = value;
      res.diag.iterations = iter;
      return res;
    }
  }

  objective.score_info(res.x, score, info);
  res.diag.grad_norm = sup_norm(score);
  res.diag.converged = res.diag.grad_norm < options.tol;
  res.diag.iterations = options.max_iter;
  res.diag.loglik = value;
  return res;
}

}  // namespace jrcr
