#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jrcr/config_io.hpp"
#include "jrcr/dataset_io.hpp"
#include "jrcr/errors.hpp"
#include "jrcr/parametric.hpp"
#include "jrcr/replication.hpp"
#include "jrcr/result_io.hpp"
#include "jrcr/semiparam.hpp"
#include "jrcr/simulate.hpp"

using namespace jrcr;

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{"Simulation and estimation for joint recurrent-event, marker, and "
               "health-status models"};
  app.require_subcommand(1);

  // simulate ------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "generate a cohort dataset");
  std::string sim_config, sim_out;
  int sim_n = 50;
  std::string sim_generator = "grid";
  std::int64_t sim_seed = -1;
  int sim_threads = 1;
  simulate->add_option("--config", sim_config, "scenario config file")->required();
  simulate->add_option("--n", sim_n, "number of units")->required();
  simulate->add_option("--out", sim_out, "output dataset path (default stdout)");
  simulate->add_option("--generator", sim_generator, "grid | exact");
  simulate->add_option("--seed", sim_seed, "override the scenario seed");
  simulate->add_option("--threads", sim_threads, "worker threads");

  // fit -----------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "fit a dataset");
  std::string fit_data, fit_out, fit_mode = "semiparametric";
  std::string fit_age = "perfect-repair-own-type";
  std::vector<double> fit_lambda_times;
  double fit_s_star = std::numeric_limits<double>::infinity();
  double fit_t_star = std::numeric_limits<double>::infinity();
  fit_cmd->add_option("--data", fit_data, "dataset file")->required();
  fit_cmd->add_option("--mode", fit_mode, "parametric | semiparametric");
  fit_cmd->add_option("--age-policy", fit_age, "effective-age policy");
  fit_cmd->add_option("--lambda-times", fit_lambda_times, "baseline evaluation times")
      ->delimiter(',');
  fit_cmd->add_option("--s-star", fit_s_star, "calendar-time truncation");
  fit_cmd->add_option("--t-star", fit_t_star, "effective-age truncation");
  fit_cmd->add_option("--out", fit_out, "result JSON path (default stdout)");

  // replicate -------------------------------------------------------------
  auto* replicate = app.add_subcommand("replicate", "run a simulation study");
  std::string rep_config, rep_out, rep_processes_out, rep_correlations_out;
  int rep_threads = 0, rep_mreps = 0;
  std::int64_t rep_seed = -1;
  replicate->add_option("--config", rep_config, "study config file")->required();
  replicate->add_option("--out", rep_out, "summary table CSV (default stdout)");
  replicate->add_option("--processes-out", rep_processes_out, "process stats CSV");
  replicate->add_option("--correlations-out", rep_correlations_out,
                        "correlation curves CSV");
  replicate->add_option("--threads", rep_threads, "worker threads");
  replicate->add_option("--mreps", rep_mreps, "override the replication count");
  replicate->add_option("--seed", rep_seed, "override the study master seed");

  // summarize -------------------------------------------------------------
  auto* summarize = app.add_subcommand("summarize", "process statistics of datasets");
  std::vector<std::string> sum_data;
  std::string sum_out;
  summarize->add_option("--data", sum_data, "dataset file(s)")->required();
  summarize->add_option("--out", sum_out, "output CSV (default stdout)");

  // survivor --------------------------------------------------------------
  auto* survivor = app.add_subcommand("survivor", "baseline survivor curves of a result");
  std::string surv_result, surv_out;
  survivor->add_option("--result", surv_result, "result JSON from `fit`")->required();
  survivor->add_option("--out", surv_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage or the requested help text
    return e.get_name() == "CallForHelp" ? 0 : 1;
  }

  if (simulate->parsed()) {
    Scenario sc = scenario_from_config_file(sim_config);
    if (sim_seed >= 0) sc.seed = static_cast<std::uint64_t>(sim_seed);
    if (sim_generator != "exact" && sim_generator != "grid")
      throw ConfigError("--generator must be grid or exact");
    const GeneratorKind kind =
        sim_generator == "exact" ? GeneratorKind::exact_special : GeneratorKind::grid;
    const Cohort cohort = simulate_cohort(sc, sim_n, kind, sim_threads);
    write_text(sim_out, serialize_dataset(cohort));
    return 0;
  }

  if (fit_cmd->parsed()) {
    const Cohort cohort = parse_dataset_file(fit_data);
    FitResult fit;
    if (fit_mode == "parametric") {
      fit = fit_special_case(cohort);
    } else if (fit_mode == "semiparametric") {
      SemiparamOptions opts;
      if (!fit_lambda_times.empty()) opts.lambda_times = fit_lambda_times;
      opts.s_star = fit_s_star;
      opts.t_star = fit_t_star;
      fit = fit_semiparametric(cohort, age_policy_from_name(fit_age), opts);
    } else {
      throw ConfigError("--mode must be parametric or semiparametric");
    }
    write_text(fit_out, result_to_json(fit, cohort.scenario_fingerprint) + "\n");
    return 0;
  }

  if (replicate->parsed()) {
    StudyConfig cfg = study_from_config_file(rep_config);
    if (rep_threads > 0) cfg.threads = rep_threads;
    if (rep_mreps > 0) cfg.mreps = rep_mreps;
    if (rep_seed >= 0) cfg.seed = static_cast<std::uint64_t>(rep_seed);
    const StudySummary summary = run_study(cfg);
    write_text(rep_out, study_table_csv(summary));
    if (!rep_processes_out.empty())
      write_text(rep_processes_out, process_stats_csv(summary.processes));
    if (!rep_correlations_out.empty())
      write_text(rep_correlations_out, correlation_csv(summary.correlations));
    return 0;
  }

  if (summarize->parsed()) {
    std::vector<Cohort> cohorts;
    for (const auto& path : sum_data) cohorts.push_back(parse_dataset_file(path));
    write_text(sum_out, process_stats_csv(summarize_processes(cohorts)));
    return 0;
  }

  if (survivor->parsed()) {
    const FitResult fit = read_result_file(surv_result);
    std::ostringstream out;
    out << "q,t,cumulative_hazard,survivor\n";
    for (std::size_t q = 0; q < fit.lambda_hat.size(); ++q) {
      const StepFunction& lambda = fit.lambda_hat[q];
      bool truncated = false;
      const StepFunction surv = baseline_survivor(lambda, &truncated);
      out << (q + 1) << ",0,0,1\n";
      for (double t : surv.jump_times()) {
        out << (q + 1) << ',' << format_double(t) << ',' << format_double(lambda(t)) << ','
            << format_double(surv(t)) << "\n";
      }
      if (truncated)
        std::cerr << "warning: risk " << (q + 1)
                  << " has a cumulative-hazard jump >= 1; survivor truncated to 0\n";
    }
    write_text(surv_out, out.str());
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
