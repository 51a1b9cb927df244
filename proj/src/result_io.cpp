#include "jrcr/result_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "jrcr/errors.hpp"

namespace jrcr {

using nlohmann::json;

double wald_p_value(double estimate, double se, double null_value) {
  if (!(se > 0.0) || !std::isfinite(se)) return std::numeric_limits<double>::quiet_NaN();
  const double z = (estimate - null_value) / se;
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

namespace {

json step_to_json(const StepFunction& f) {
  return json{{"jump_times", f.jump_times()},
              {"jump_sizes", f.jump_sizes()},
              {"initial_value", f.initial_value()}};
}

json diag_to_json(const NewtonDiagnostics& d) {
  return json{{"iterations", d.iterations}, {"converged", d.converged},
              {"grad_norm", d.grad_norm},   {"loglik", d.loglik},
              {"skipped", d.skipped}};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      if (std::isfinite(m(r, c)))
        row.push_back(m(r, c));
      else
        row.push_back(nullptr);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string result_to_json(const FitResult& fit, std::uint64_t config_fingerprint) {
  json j;
  j["schema"] = "jrcr-result/1";
  j["mode"] = fit.mode == FitMode::parametric ? "parametric" : "semiparametric";
  j["config_fingerprint"] = config_fingerprint;
  j["spaces"] = {{"lm_states", fit.spaces.lm_states()},
                 {"hs_states", fit.spaces.hs_states()},
                 {"hs_absorbing", [&] {
                    std::vector<int> abs;
                    for (int s : fit.spaces.hs_states())
                      if (fit.spaces.is_absorbing(s)) abs.push_back(s);
                    return abs;
                  }()},
                 {"q_count", fit.spaces.q_count()}};
  j["covariate_dim"] = fit.covariate_dim;

  json estimates = json::array();
  for (const auto& e : fit.estimates) {
    json row;
    row["name"] = e.name;
    row["value"] = e.value;
    if (e.se_valid) {
      row["se"] = e.se;
      row["null_value"] = e.null_value;
      row["p_value"] = wald_p_value(e.value, e.se, e.null_value);
    } else {
      row["se"] = nullptr;
    }
    estimates.push_back(std::move(row));
  }
  j["estimates"] = std::move(estimates);

  if (fit.mode == FitMode::semiparametric) {
    json lambdas = json::array();
    for (std::size_t q = 0; q < fit.lambda_hat.size(); ++q) {
      json entry = step_to_json(fit.lambda_hat[q]);
      entry["q"] = q + 1;
      lambdas.push_back(std::move(entry));
    }
    j["lambda"] = std::move(lambdas);
    j["lambda_se"] = {{"times", fit.lambda_eval_times},
                      {"naive", matrix_to_json(fit.lambda_se_naive)},
                      {"full", matrix_to_json(fit.lambda_se_full)}};
    j["rate_se_plain"] = {{"eta", matrix_to_json(fit.eta_se_plain)},
                          {"xi", matrix_to_json(fit.xi_se_plain)}};
    j["diagnostics"] = {{"R", diag_to_json(fit.diag_R)},
                        {"W", diag_to_json(fit.diag_W)},
                        {"V", diag_to_json(fit.diag_V)}};
  }
  return j.dump(2);
}

void write_result_file(const FitResult& fit, std::uint64_t config_fingerprint,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write result file: " + path);
  out << result_to_json(fit, config_fingerprint) << "\n";
}

FitResult read_result_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open result file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed result file " + path + ": " + e.what());
  }
  if (j.value("schema", "") != "jrcr-result/1")
    throw ConfigError(path + ": unknown result schema");

  FitResult fit;
  fit.mode = j.value("mode", "semiparametric") == "parametric" ? FitMode::parametric
                                                               : FitMode::semiparametric;
  for (const auto& row : j["estimates"]) {
    Estimate e;
    e.name = row["name"];
    e.value = row["value"];
    if (row.contains("se") && !row["se"].is_null()) {
      e.se = row["se"];
      e.se_valid = true;
      e.null_value = row.value("null_value", 0.0);
    }
    fit.estimates.push_back(std::move(e));
  }
  if (j.contains("lambda")) {
    for (const auto& entry : j["lambda"]) {
      fit.lambda_hat.emplace_back(entry["jump_times"].get<std::vector<double>>(),
                                  entry["jump_sizes"].get<std::vector<double>>(),
                                  entry.value("initial_value", 0.0));
    }
  }
  return fit;
}

}  // namespace jrcr
