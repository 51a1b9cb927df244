#pragma once

#include <string>

#include "jrcr/replication.hpp"
#include "jrcr/scenario.hpp"

namespace jrcr {

// Flat key-value configuration text: one `key = value` per line, `#` for
// comments. Every Scenario/StudyConfig field has a key; unknown keys are
// errors so that typos surface immediately.
Scenario scenario_from_config_file(const std::string& path);
Scenario scenario_from_config_text(const std::string& text, const std::string& source);

StudyConfig study_from_config_file(const std::string& path);
StudyConfig study_from_config_text(const std::string& text, const std::string& source);

std::string scenario_to_config(const Scenario& scenario);

// CSV emitters for study outputs.
std::string study_table_csv(const StudySummary& summary);
std::string process_stats_csv(const ProcessStats& stats);
std::string correlation_csv(const CorrelationCurves& curves);

}  // namespace jrcr
