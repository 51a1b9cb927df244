#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jrcr/errors.hpp"
#include "jrcr/replication.hpp"

using namespace jrcr;

namespace {

StudyConfig small_study() {
  StudyConfig cfg;
  cfg.scenario = illustration_scenario();
  cfg.scenario.ds = 0.005;
  cfg.scenario.grid_prob = GridProbMode::exp_interval;
  cfg.n = 25;
  cfg.mreps = 12;
  cfg.seed = 5150;
  return cfg;
}

bool same_summary(const StudySummary& a, const StudySummary& b) {
  if (a.params.size() != b.params.size() || a.failures != b.failures) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& x = a.params[i];
    const auto& y = b.params[i];
    auto eq = [](double u, double v) {
      return (std::isnan(u) && std::isnan(v)) || u == v;
    };
    if (x.name != y.name || !eq(x.mean, y.mean) || !eq(x.sd, y.sd) ||
        !eq(x.mean_ase, y.mean_ase) || !eq(x.pl, y.pl) || !eq(x.pu, y.pu))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identical study configs give bit-identical summaries, any thread count") {
  StudyConfig cfg = small_study();
  cfg.threads = 1;
  const StudySummary a = run_study(cfg);
  const StudySummary b = run_study(cfg);
  cfg.threads = 2;
  const StudySummary c = run_study(cfg);
  CHECK(same_summary(a, b));
  CHECK(same_summary(a, c));

  StudyConfig other = small_study();
  other.seed += 1;
  other.threads = 1;
  CHECK(!same_summary(a, run_study(other)));
}

TEST_CASE("a single replication flags the undefined SD") {
  StudyConfig cfg = small_study();
  cfg.mreps = 1;
  const StudySummary s = run_study(cfg);
  CHECK(s.mreps == 1);
  for (const auto& p : s.params) {
    if (p.n_used == 1) CHECK(std::isnan(p.sd));
  }
}

TEST_CASE("percentiles are ordered and bracket the mean") {
  const StudySummary s = run_study(small_study());
  for (const auto& p : s.params) {
    if (p.n_used < 2) continue;
    CHECK(p.pl <= p.pu);
    CHECK(p.pl <= p.mean);
    CHECK(p.mean <= p.pu);
  }
}

TEST_CASE("process summaries on a degenerate single unit") {
  Cohort cohort;
  cohort.spaces = StateSpaces({1, 2}, {0, 1, 2}, {0}, 2);
  UnitHistory u;
  u.lm_initial = 2;
  u.hs_initial = 1;
  u.rcr_times = {{}, {}};
  u.end_time = 3.5;
  cohort.units = {u};

  const ProcessStats stats = summarize_processes({cohort});
  CHECK(stats.units == 1);
  CHECK(stats.risks[0].mean_count == 0.0);
  CHECK(std::isnan(stats.risks[0].time_per_event));
  // Occupation accrues entirely to the initial states.
  for (const auto& row : stats.lm_states) {
    if (row.label == 2)
      CHECK(row.mean_occupation == doctest::Approx(3.5));
    else
      CHECK(row.mean_occupation == 0.0);
  }
  for (const auto& row : stats.hs_states) {
    if (row.label == 1)
      CHECK(row.mean_occupation == doctest::Approx(3.5));
    else
      CHECK(row.mean_occupation == 0.0);
  }
}

TEST_CASE("pooled sojourns reproduce occupation over transitions") {
  Scenario sc = illustration_scenario();
  sc.ds = 0.005;
  sc.grid_prob = GridProbMode::exp_interval;
  std::vector<Cohort> cohorts;
  for (int rep = 0; rep < 10; ++rep) {
    sc.seed = 9100 + rep;
    cohorts.push_back(simulate_cohort(sc, 50, GeneratorKind::grid, 2));
  }
  const ProcessStats stats = summarize_processes(cohorts);
  const double n = static_cast<double>(stats.units);
  for (const auto& row : stats.hs_states) {
    if (row.mean_transitions_in <= 0) continue;
    const double total_occ = row.mean_occupation * n;
    const double reconstructed = row.mean_sojourn * row.mean_transitions_in * n;
    CHECK(reconstructed == doctest::Approx(total_occ).epsilon(0.05));
  }
}

TEST_CASE("correlation curves flag degenerate columns and keep unit diagonals") {
  Scenario sc = illustration_scenario();
  sc.ds = 0.005;
  sc.grid_prob = GridProbMode::exp_interval;
  std::vector<Cohort> cohorts;
  for (int rep = 0; rep < 5; ++rep) {
    sc.seed = 9300 + rep;
    cohorts.push_back(simulate_cohort(sc, 50, GeneratorKind::grid, 2));
  }
  const CorrelationCurves curves = correlation_trajectories(cohorts, {0.0, 0.5, 1.0, 2.0});
  REQUIRE(curves.labels.size() == 6);  // V=2, W=2, W=3, N1, N2, N3

  // At s = 0 every count column is constant zero: flagged, not zeroed.
  const Matrix& at0 = curves.mean_corr[0];
  for (int j = 3; j < 6; ++j) CHECK(std::isnan(at0(j, j)));
  // State indicators at s = 0 vary across units, so their diagonal is defined.
  CHECK(at0(0, 0) == doctest::Approx(1.0));

  // Non-trivial dependence appears somewhere on [0.5, 3].
  double max_abs = 0.0;
  for (std::size_t mi = 1; mi < curves.mesh.size(); ++mi) {
    const Matrix& m = curves.mean_corr[mi];
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < j; ++k)
        if (!std::isnan(m(j, k))) max_abs = std::max(max_abs, std::abs(m(j, k)));
  }
  CHECK(max_abs > 0.1);
}

TEST_CASE("parametric-mode studies aggregate the occurrence-exposure fits") {
  StudyConfig cfg;
  cfg.scenario = illustration_scenario();
  // Special case: constant hazards, alpha = 1, all thetas 0.
  cfg.scenario.params.baseline = {WeibullHazard{1.0, 1.0}, WeibullHazard{1.0, 2.0},
                                  WeibullHazard{1.0, 4.0}};
  cfg.scenario.params.alpha = {1.0, 1.0, 1.0};
  std::fill(cfg.scenario.params.theta_R.begin(), cfg.scenario.params.theta_R.end(), 0.0);
  std::fill(cfg.scenario.params.theta_W.begin(), cfg.scenario.params.theta_W.end(), 0.0);
  std::fill(cfg.scenario.params.theta_V.begin(), cfg.scenario.params.theta_V.end(), 0.0);
  cfg.generator = GeneratorKind::exact_special;
  cfg.mode = FitMode::parametric;
  cfg.n = 100;
  cfg.mreps = 40;
  cfg.seed = 31337;
  cfg.threads = 2;
  const StudySummary s = run_study(cfg);
  CHECK(s.failures == 0);
  for (const auto& p : s.params) {
    if (p.name == "lambda0_1") {
      CHECK(p.truth == doctest::Approx(1.0));
      CHECK(std::abs(p.mean - 1.0) < 4.0 * p.sd / std::sqrt(40.0));
    }
    if (p.name == "xi(2,1)") CHECK(p.truth == doctest::Approx(0.2));
  }
}

TEST_CASE("spread of every estimator shrinks from n=50 to n=100") {
  auto run = [](int n) {
    StudyConfig cfg;
    cfg.scenario = illustration_scenario();
    cfg.scenario.ds = 0.005;
    cfg.scenario.grid_prob = GridProbMode::exp_interval;
    cfg.n = n;
    cfg.mreps = 40;
    cfg.seed = 777000 + n;
    cfg.threads = 2;
    return run_study(cfg);
  };
  const StudySummary at50 = run(50);
  const StudySummary at100 = run(100);
  int total = 0, smaller = 0;
  for (std::size_t i = 0; i < at50.params.size(); ++i) {
    if (!(at50.params[i].sd > 0.0) || !(at100.params[i].sd > 0.0)) continue;
    ++total;
    if (at100.params[i].sd < at50.params[i].sd) ++smaller;
  }
  CHECK(total >= 40);
  CHECK(smaller >= static_cast<int>(0.9 * total));
}
