#pragma once

#include <cstdint>
#include <string>

#include "jrcr/fit_result.hpp"

namespace jrcr {

// JSON result schema "jrcr-result/1": estimates with SEs and two-sided Wald
// p-values (alpha tested against 1), the fitted step baselines, pointwise
// baseline SEs (naive and plug-in), and the optimizer diagnostics.
std::string result_to_json(const FitResult& fit, std::uint64_t config_fingerprint);
void write_result_file(const FitResult& fit, std::uint64_t config_fingerprint,
                       const std::string& path);

// Reads back what the `survivor` subcommand needs (estimates and baselines).
FitResult read_result_file(const std::string& path);

double wald_p_value(double estimate, double se, double null_value);

}  // namespace jrcr
