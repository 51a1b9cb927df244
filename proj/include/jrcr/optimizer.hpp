#pragma once

#include <functional>
#include <vector>

#include "jrcr/fit_result.hpp"
#include "jrcr/linalg.hpp"

namespace jrcr {

// Objective bundle for a concave log-likelihood: value, and score together
// with observed information (negative Hessian).
struct Objective {
  int dim = 0;
  std::function<double(const std::vector<double>&)> value;
  std::function<void(const std::vector<double>&, std::vector<double>& score,
                     Matrix& info)>
      score_info;
};

struct NewtonOptions {
  double tol = 1e-8;  // sup-norm of the score
  int max_iter = 100;
  int max_halvings = 20;
};

struct NewtonResult {
  std::vector<double> x;
  NewtonDiagnostics diag;
};

// Ascent iteration x <- x + I^-1 U with step-halving until the objective
// improves. A singular information matrix raises NumericalError carrying the
// eigen-spectrum; plain non-convergence only flags the result.
NewtonResult newton_raphson(const Objective& objective, std::vector<double> init,
                            const NewtonOptions& options = {});

}  // namespace jrcr
