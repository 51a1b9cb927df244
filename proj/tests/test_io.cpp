#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "jrcr/config_io.hpp"
#include "jrcr/dataset_io.hpp"
#include "jrcr/errors.hpp"
#include "jrcr/result_io.hpp"
#include "jrcr/semiparam.hpp"
#include "jrcr/simulate.hpp"

using namespace jrcr;

namespace {

Scenario special_scenario() {
  Scenario sc;
  sc.spaces = StateSpaces({1, 2}, {0, 1, 2}, {0}, 2);
  ModelParams p;
  p.baseline = {WeibullHazard{1.0, 1.0}, WeibullHazard{1.0, 2.0}};
  p.alpha = {1.0, 1.0};
  p.eta = Matrix(2, 2);
  p.eta(0, 1) = 0.3;
  p.eta(0, 0) = -0.3;
  p.eta(1, 0) = 0.4;
  p.eta(1, 1) = -0.4;
  p.xi = Matrix(3, 3);
  p.xi(1, 0) = 0.2;
  p.xi(1, 2) = 0.5;
  p.xi(1, 1) = -0.7;
  p.xi(2, 0) = 0.05;
  p.xi(2, 1) = 0.5;
  p.xi(2, 2) = -0.55;
  sc.params = std::move(p);
  sc.params.theta_R.assign(theta_R_dim(sc.spaces, 0), 0.0);
  sc.params.theta_W.assign(theta_W_dim(sc.spaces, 0), 0.0);
  sc.params.theta_V.assign(theta_V_dim(sc.spaces, 0), 0.0);
  sc.covariate_law = {};
  sc.censor_mean = 2.0;
  return sc;
}

std::string minimal_header() {
  return "jrcr-dataset v1\n"
         "lm_states 1 2\n"
         "hs_states 0 1\n"
         "hs_absorbing 0\n"
         "q_count 1\n"
         "covariate_names\n";
}

}  // namespace

TEST_CASE("dataset round-trip is exact, including covariates and times") {
  Scenario sc = illustration_scenario();
  sc.ds = 0.01;
  sc.grid_prob = GridProbMode::exp_interval;
  sc.seed = 4;
  const Cohort cohort = simulate_cohort(sc, 40, GeneratorKind::grid);

  std::istringstream in(serialize_dataset(cohort));
  const Cohort parsed = parse_dataset(in);
  CHECK(parsed == cohort);

  // Also for the exact generator, whose times are irrational-looking doubles.
  Scenario sp = special_scenario();
  sp.seed = 9;
  const Cohort c2 = simulate_cohort(sp, 50, GeneratorKind::exact_special);
  std::istringstream in2(serialize_dataset(c2));
  CHECK(parse_dataset(in2) == c2);
}

TEST_CASE("parser reports violations with line numbers") {
  SUBCASE("record after the end record") {
    std::istringstream in(minimal_header() +
                          "unit 1\ncovariates\ninitial 1 1\n"
                          "record 1 end censored\nrecord 2 rcr 1\n");
    try {
      parse_dataset(in, "test");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      REQUIRE(e.violations().size() >= 1);
      CHECK(e.violations()[0].find("test:11") != std::string::npos);
      CHECK(e.violations()[0].find("after the end record") != std::string::npos);
    }
  }
  SUBCASE("HS transition out of an absorbing state") {
    std::istringstream in(minimal_header() +
                          "unit 1\ncovariates\ninitial 1 1\n"
                          "record 0.5 hs 1 0\nrecord 0.7 hs 0 1\n"
                          "record 1 end censored\n");
    CHECK_THROWS_AS(parse_dataset(in, "test"), ValidationError);
  }
  SUBCASE("unknown state label") {
    std::istringstream in(minimal_header() +
                          "unit 1\ncovariates\ninitial 1 7\nrecord 1 end censored\n");
    CHECK_THROWS_AS(parse_dataset(in, "test"), ValidationError);
  }
  SUBCASE("risk index outside the declared Q") {
    std::istringstream in(minimal_header() +
                          "unit 1\ncovariates\ninitial 1 1\n"
                          "record 0.5 rcr 2\nrecord 1 end censored\n");
    try {
      parse_dataset(in, "test");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.violations()[0].find("outside 1..1") != std::string::npos);
    }
  }
  SUBCASE("missing end record") {
    std::istringstream in(minimal_header() + "unit 1\ncovariates\ninitial 1 1\n");
    CHECK_THROWS_AS(parse_dataset(in, "test"), ValidationError);
  }
  SUBCASE("times out of order") {
    std::istringstream in(minimal_header() +
                          "unit 1\ncovariates\ninitial 1 1\n"
                          "record 0.5 rcr 1\nrecord 0.4 rcr 1\nrecord 1 end censored\n");
    CHECK_THROWS_AS(parse_dataset(in, "test"), ValidationError);
  }
}

TEST_CASE("scenario config round-trips and rejects unknown keys") {
  Scenario sc = illustration_scenario();
  sc.seed = 123;
  const std::string text = scenario_to_config(sc);
  const Scenario back = scenario_from_config_text(text, "roundtrip");
  CHECK(back.fingerprint() == sc.fingerprint());

  CHECK_THROWS_AS(scenario_from_config_text(text + "typo_key = 1\n", "bad"), ConfigError);
  CHECK_THROWS_AS(scenario_from_config_text("lm_states = 1 2\n", "incomplete"),
                  ConfigError);
}

TEST_CASE("study config parses the table-study fields") {
  Scenario sc = illustration_scenario();
  std::string text = scenario_to_config(sc);
  text += "n = 50\nmreps = 10\nfit_mode = semiparametric\nstudy_seed = 7\n"
          "lambda_times = 0.3 0.6\npercentiles = 0.025 0.975\nthreads = 2\n";
  const StudyConfig cfg = study_from_config_text(text, "study");
  CHECK(cfg.n == 50);
  CHECK(cfg.mreps == 10);
  CHECK(cfg.mode == FitMode::semiparametric);
  CHECK(cfg.lambda_times == std::vector<double>{0.3, 0.6});
  CHECK(cfg.seed == 7);

  CHECK_THROWS_AS(study_from_config_text(text + "bogus = 1\n", "study"), ConfigError);
}

TEST_CASE("result JSON preserves estimates and baselines to full precision") {
  Scenario sc = illustration_scenario();
  sc.ds = 0.01;
  sc.grid_prob = GridProbMode::exp_interval;
  sc.seed = 21;
  const Cohort cohort = simulate_cohort(sc, 20, GeneratorKind::grid);
  const FitResult fit = fit_semiparametric(cohort, AgePolicy::perfect_repair_own_type);

  const std::string path = "/tmp/jrcr_test_result.json";
  write_result_file(fit, cohort.scenario_fingerprint, path);
  const FitResult back = read_result_file(path);

  REQUIRE(back.estimates.size() == fit.estimates.size());
  for (std::size_t i = 0; i < fit.estimates.size(); ++i) {
    CHECK(back.estimates[i].name == fit.estimates[i].name);
    CHECK(back.estimates[i].value == fit.estimates[i].value);  // exact round-trip
    if (fit.estimates[i].se_valid) CHECK(back.estimates[i].se == fit.estimates[i].se);
  }
  REQUIRE(back.lambda_hat.size() == fit.lambda_hat.size());
  for (std::size_t q = 0; q < fit.lambda_hat.size(); ++q)
    CHECK(back.lambda_hat[q] == fit.lambda_hat[q]);
}

TEST_CASE("Wald p-values against the null") {
  CHECK(wald_p_value(1.0, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(wald_p_value(1.96, 1.0, 0.0) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(std::isnan(wald_p_value(1.0, 0.0, 0.0)));
}

TEST_CASE("parser accepts CRLF line endings") {
  std::string text = minimal_header() +
                     "unit 1\ncovariates\ninitial 1 1\nrecord 1 end censored\n";
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  std::istringstream in(crlf);
  const Cohort cohort = parse_dataset(in, "crlf");
  CHECK(cohort.units.size() == 1);
  CHECK(cohort.units[0].end_time == 1.0);
}
