#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jrcr/design.hpp"
#include "jrcr/effective_age.hpp"
#include "jrcr/errors.hpp"
#include "jrcr/intensity.hpp"
#include "jrcr/model_params.hpp"
#include "jrcr/rng.hpp"
#include "jrcr/state_spaces.hpp"

using namespace jrcr;

namespace {

StateSpaces three_by_three() { return StateSpaces({1, 2, 3}, {1, 2, 3}, {1}, 3); }

// Minimal single-risk model over W = {1,2}, V = {0 absorbing, 1}.
ModelParams tiny_params(const StateSpaces& spaces, double rate) {
  ModelParams p;
  p.baseline = {WeibullHazard{1.0, 1.0 / rate}};
  p.alpha = {1.0};
  p.eta = Matrix(spaces.lm_count(), spaces.lm_count());
  p.xi = Matrix(spaces.hs_count(), spaces.hs_count());
  p.theta_R.assign(theta_R_dim(spaces, 0), 0.0);
  p.theta_W.assign(theta_W_dim(spaces, 0), 0.0);
  p.theta_V.assign(theta_V_dim(spaces, 0), 0.0);
  return p;
}

}  // namespace

TEST_CASE("iota maps the first element to zeros and the rest to indicators") {
  const std::vector<int> space{1, 2, 3};
  CHECK(iota(space, 1) == std::vector<double>{0.0, 0.0});
  CHECK(iota(space, 2) == std::vector<double>{1.0, 0.0});
  CHECK(iota(space, 3) == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(iota(space, 7), std::domain_error);
}

TEST_CASE("state spaces validate their construction") {
  CHECK_THROWS_AS(StateSpaces({1, 2}, {1, 2}, {}, 1), ConfigError);    // no absorbing
  CHECK_THROWS_AS(StateSpaces({1, 2}, {1, 2}, {1, 2}, 1), ConfigError);  // all absorbing
  CHECK_THROWS_AS(StateSpaces({1}, {1, 2}, {1}, 1), ConfigError);      // single LM state
  CHECK_THROWS_AS(StateSpaces({1, 2}, {1, 2}, {1}, 0), ConfigError);   // Q = 0
  CHECK_THROWS_AS(StateSpaces({1, 1}, {1, 2}, {1}, 1), ConfigError);   // duplicate label

  const auto sp = three_by_three();
  CHECK(sp.hs_transient() == std::vector<int>{2, 3});
  CHECK(sp.lm_pairs().size() == 6);
  CHECK(sp.hs_pairs().size() == 4);  // |V1||V| - |V1| = 2*3 - 2
}

TEST_CASE("design rows concatenate covariates and dummy codes") {
  // Four HS states with the last absorbing, so the transient set is {1,2,3}.
  // HS dummies drop the first transient state; LM dummies drop the last state.
  const StateSpaces spaces({1, 2, 3}, {1, 2, 3, 4}, {4}, 3);
  StateSnapshot snap;
  snap.hs_state = 2;
  snap.lm_state = 2;
  snap.rcr_counts = {2, 0, 1};

  const std::vector<double> x{1.0, -0.3};
  CHECK(design_row_R(spaces, snap, x) == std::vector<double>{1.0, -0.3, 1.0, 0.0, 0.0, 1.0});
  CHECK(design_row_W(spaces, snap, x) ==
        std::vector<double>{1.0, -0.3, 1.0, 0.0, 2.0, 0.0, 1.0});

  StateSnapshot neutral;
  neutral.hs_state = 1;  // first transient HS state
  neutral.lm_state = 3;  // last LM state
  neutral.rcr_counts = {0, 0, 0};
  CHECK(design_row_R(spaces, neutral, {}) == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(design_row_W(spaces, neutral, {}) ==
        std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0});

  StateSnapshot snap_v;
  snap_v.hs_state = 1;
  snap_v.lm_state = 2;
  snap_v.rcr_counts = {1, 1, 1};
  CHECK(design_row_V(spaces, snap_v, {0.0}) ==
        std::vector<double>{0.0, 0.0, 1.0, 1.0, 1.0, 1.0});

  // Dimensional bookkeeping.
  CHECK(static_cast<int>(design_row_R(spaces, snap, x).size()) == theta_R_dim(spaces, 2));
  CHECK(static_cast<int>(design_row_W(spaces, snap, x).size()) == theta_W_dim(spaces, 2));
  CHECK(static_cast<int>(design_row_V(spaces, snap, x).size()) == theta_V_dim(spaces, 2));
}

TEST_CASE("effective age under the built-in policies") {
  UnitHistory unit;
  unit.rcr_times = {{1.0, 1.5}};
  unit.lm_initial = 1;
  unit.hs_initial = 1;
  unit.end_time = 2.0;

  CHECK(effective_age(AgePolicy::minimal_repair, unit, 0, 1.7) == doctest::Approx(1.7));
  // Left-continuity at an event time: the event at 1.5 does not count yet.
  CHECK(effective_age(AgePolicy::perfect_repair_own_type, unit, 0, 1.5) ==
        doctest::Approx(0.5));
  CHECK(effective_age(AgePolicy::perfect_repair_own_type, unit, 0, 1.8) ==
        doctest::Approx(0.3));
  // Just after a reset event the age restarts at zero.
  CHECK(effective_age(AgePolicy::perfect_repair_own_type, unit, 0, 1.5 + 1e-12) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(effective_age(AgePolicy::minimal_repair, unit, 0, 0.0), std::domain_error);

  // Any-event policy also resets on LM/HS transitions.
  UnitHistory unit2 = unit;
  unit2.lm_path = {{1.6, 1, 2}};
  unit2.lm_initial = 1;
  CHECK(effective_age(AgePolicy::perfect_repair_any_event, unit2, 0, 1.8) ==
        doctest::Approx(0.2));
  CHECK(effective_age(AgePolicy::perfect_repair_any_rcr, unit2, 0, 1.8) ==
        doctest::Approx(0.3));
  CHECK(effective_age_slope(AgePolicy::perfect_repair_own_type, unit2, 0, 1.8) == 1.0);
}

TEST_CASE("rho family alpha^log(1+N)") {
  const RhoFamily& rho = power_log_rho();
  CHECK(rho.value({0, 5}, 0, 2.0) == doctest::Approx(1.0));
  CHECK(rho.value({7, 5}, 0, 1.0) == doctest::Approx(1.0));
  CHECK(rho.value({1, 0}, 0, 2.0) == doctest::Approx(1.61680).epsilon(1e-5));
  CHECK_THROWS_AS(rho.value({1, 0}, 0, 0.0), std::domain_error);
  CHECK_THROWS_AS(rho.value({1, 0}, 0, -1.0), std::domain_error);

  // Derivatives of log rho against finite differences.
  const std::vector<int> counts{3, 1};
  const double a = 1.7, h = 1e-6;
  const double fd1 =
      (std::log(rho.value(counts, 0, a + h)) - std::log(rho.value(counts, 0, a - h))) /
      (2 * h);
  CHECK(rho.dlog(counts, 0, a) == doctest::Approx(fd1).epsilon(1e-8));
  const double fd2 = (rho.dlog(counts, 0, a + h) - rho.dlog(counts, 0, a - h)) / (2 * h);
  CHECK(rho.d2log(counts, 0, a) == doctest::Approx(fd2).epsilon(1e-6));
}

TEST_CASE("generator matrices are validated") {
  const auto spaces = three_by_three();
  ModelParams p;
  p.baseline = {WeibullHazard{2.0, 0.9}, WeibullHazard{2.0, 1.0}, WeibullHazard{3.0, 1.1}};
  p.alpha = {1.5, 1.2, 2.0};
  p.eta = Matrix(3, 3);
  p.eta(0, 1) = 0.2;
  p.eta(0, 0) = -0.2;
  p.xi = Matrix(3, 3);
  p.xi(1, 0) = 0.3;
  p.xi(1, 1) = -0.3;
  p.theta_R.assign(theta_R_dim(spaces, 0), 0.0);
  p.theta_W.assign(theta_W_dim(spaces, 0), 0.0);
  p.theta_V.assign(theta_V_dim(spaces, 0), 0.0);
  CHECK_NOTHROW(p.validate(spaces, 0));

  auto bad_row = p;
  bad_row.eta(1, 2) = 0.5;  // row no longer sums to zero
  CHECK_THROWS_AS(bad_row.validate(spaces, 0), ConfigError);

  auto neg = p;
  neg.eta(0, 1) = -0.2;
  neg.eta(0, 0) = 0.2;
  CHECK_THROWS_AS(neg.validate(spaces, 0), ConfigError);

  auto absorbing_leak = p;
  absorbing_leak.xi(0, 1) = 0.1;
  absorbing_leak.xi(0, 0) = -0.1;
  CHECK_THROWS_AS(absorbing_leak.validate(spaces, 0), ConfigError);

  auto wrong_dim = p;
  wrong_dim.theta_R.push_back(1.0);
  CHECK_THROWS_AS(wrong_dim.validate(spaces, 0), ConfigError);
}

TEST_CASE("link factors are exactly one at the reference states, zero counts, zero X") {
  const StateSpaces spaces({1, 2, 3}, {9, 1, 2}, {9}, 2);
  StateSnapshot snap;
  snap.lm_state = 3;   // last LM state is the reference level
  snap.hs_state = 1;   // first transient HS state is the reference level
  snap.rcr_counts = {0, 0};
  const std::vector<double> x{0.0, 0.0};
  std::vector<double> theta_R(theta_R_dim(spaces, 2), 0.7);
  std::vector<double> theta_W(theta_W_dim(spaces, 2), -1.3);
  std::vector<double> theta_V(theta_V_dim(spaces, 2), 2.9);

  auto dotv = [](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };
  CHECK(std::exp(dotv(design_row_R(spaces, snap, x), theta_R)) == 1.0);
  CHECK(std::exp(dotv(design_row_W(spaces, snap, x), theta_W)) == 1.0);
  CHECK(std::exp(dotv(design_row_V(spaces, snap, x), theta_V)) == 1.0);
}

TEST_CASE("intensity evaluates the three channel families") {
  const StateSpaces spaces({1, 2}, {0, 1}, {0}, 1);
  const ModelParams p = tiny_params(spaces, 1.0);

  UnitHistory unit;
  unit.covariates = {};
  unit.lm_initial = 1;
  unit.hs_initial = 1;
  unit.rcr_times = {{}};
  unit.end_time = 5.0;

  // Constant baseline, rho = 1, zero thetas: intensity equals the rate.
  CHECK(intensity(spaces, p, AgePolicy::minimal_repair, power_log_rho(), unit, 2.0,
                  RcrChannel{0}) == doctest::Approx(1.0));

  // After the unit is absorbed every channel is zero.
  UnitHistory dead = unit;
  dead.hs_path = {{1.0, 1, 0}};
  dead.end_time = 1.0;
  dead.end_reason = EndReason::absorbed;
  CHECK(intensity(spaces, p, AgePolicy::minimal_repair, power_log_rho(), dead, 1.5,
                  RcrChannel{0}) == 0.0);
  CHECK(intensity(spaces, p, AgePolicy::minimal_repair, power_log_rho(), dead, 1.5,
                  HsChannel{1, 0}) == 0.0);

  // Channel out of an absorbing state is zero, not an error.
  CHECK(intensity(spaces, p, AgePolicy::minimal_repair, power_log_rho(), unit, 0.5,
                  HsChannel{0, 1}) == 0.0);

  // Weibull hazard evaluation: shape 2, scale 0.9, age 0.6.
  const StateSpaces sp3({1, 2}, {0, 1}, {0}, 1);
  ModelParams wp = tiny_params(sp3, 1.0);
  wp.baseline = {WeibullHazard{2.0, 0.9}};
  UnitHistory u2 = unit;
  u2.rcr_times = {{1.0}};  // own-type age at s=1.6 is 0.6
  CHECK(intensity(sp3, wp, AgePolicy::perfect_repair_own_type, power_log_rho(), u2, 1.6,
                  RcrChannel{0}) == doctest::Approx((2.0 / 0.9) * (0.6 / 0.9)).epsilon(1e-9));
  CHECK((2.0 / 0.9) * (0.6 / 0.9) == doctest::Approx(1.48148).epsilon(1e-5));
}

TEST_CASE("intensity is invariant to order-preserving relabeling") {
  const StateSpaces a({1, 2, 3}, {1, 2, 3}, {1}, 2);
  const StateSpaces b({10, 20, 30}, {7, 8, 9}, {7}, 2);

  ModelParams p;
  p.baseline = {WeibullHazard{2.0, 0.9}, WeibullHazard{1.0, 2.0}};
  p.alpha = {1.5, 1.1};
  p.eta = Matrix(3, 3);
  p.eta(0, 1) = 0.2;
  p.eta(0, 2) = 0.1;
  p.eta(0, 0) = -0.3;
  p.eta(1, 0) = 0.1;
  p.eta(1, 1) = -0.1;
  p.eta(2, 2) = 0.0;
  p.xi = Matrix(3, 3);
  p.xi(1, 0) = 0.2;
  p.xi(1, 2) = 0.5;
  p.xi(1, 1) = -0.7;
  p.xi(2, 0) = 0.05;
  p.xi(2, 1) = 0.5;
  p.xi(2, 2) = -0.55;
  p.theta_R = {0.5, 0.3, -0.2, 0.1};
  p.theta_W = {0.5, 0.3, 0.2, -0.1};
  p.theta_V = {0.5, 0.3, -0.2, 0.4, 0.6};

  UnitHistory ua;
  ua.covariates = {1.0};
  ua.lm_initial = 2;
  ua.hs_initial = 3;
  ua.rcr_times = {{0.4}, {}};
  ua.lm_path = {{0.6, 2, 1}};
  ua.hs_path = {};
  ua.end_time = 3.0;

  UnitHistory ub = ua;
  ub.lm_initial = 20;
  ub.hs_initial = 9;
  ub.lm_path = {{0.6, 20, 10}};

  for (double s : {0.5, 0.9, 2.0}) {
    CHECK(intensity(a, p, AgePolicy::perfect_repair_own_type, power_log_rho(), ua, s,
                    RcrChannel{0}) ==
          doctest::Approx(intensity(b, p, AgePolicy::perfect_repair_own_type,
                                    power_log_rho(), ub, s, RcrChannel{0})));
    CHECK(intensity(a, p, AgePolicy::perfect_repair_own_type, power_log_rho(), ua, s,
                    LmChannel{1, 2}) ==
          doctest::Approx(intensity(b, p, AgePolicy::perfect_repair_own_type,
                                    power_log_rho(), ub, s, LmChannel{10, 20})));
    CHECK(intensity(a, p, AgePolicy::perfect_repair_own_type, power_log_rho(), ua, s,
                    HsChannel{3, 1}) ==
          doctest::Approx(intensity(b, p, AgePolicy::perfect_repair_own_type,
                                    power_log_rho(), ub, s, HsChannel{9, 7})));
  }
}

TEST_CASE("Weibull cumulative hazard matches numerical integration") {
  for (const auto& w : {WeibullHazard{2.0, 0.9}, WeibullHazard{2.0, 1.0},
                        WeibullHazard{3.0, 1.1}, WeibullHazard{1.0, 2.0}}) {
    for (double t : {0.25, 1.0, 2.0, 3.0}) {
      // Composite Simpson.
      const int n = 4000;
      const double h = t / n;
      double acc = w.hazard(0.0) + w.hazard(t);
      for (int i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * w.hazard(i * h);
      acc *= h / 3.0;
      CHECK(w.cumulative(t) == doctest::Approx(acc).epsilon(1e-8));
    }
  }
}

TEST_CASE("unit history validation catches broken chains") {
  const auto spaces = three_by_three();
  UnitHistory u;
  u.covariates = {1.0, 0.5};
  u.lm_initial = 1;
  u.hs_initial = 2;
  u.rcr_times = {{0.5}, {}, {}};
  u.lm_path = {{0.7, 1, 2}};
  u.hs_path = {{1.0, 2, 1}};
  u.end_time = 1.0;
  u.end_reason = EndReason::absorbed;
  CHECK(u.validate(spaces).empty());

  auto broken = u;
  broken.lm_path = {{0.7, 2, 3}};  // chain starts from the wrong state
  CHECK(!broken.validate(spaces).empty());

  auto late = u;
  late.rcr_times = {{0.5, 1.5}, {}, {}};  // event after absorption
  CHECK(!late.validate(spaces).empty());

  auto tie = u;
  tie.rcr_times = {{0.7}, {}, {}};  // collides with the LM transition
  CHECK(!tie.validate(spaces).empty());

  auto not_absorbed = u;
  not_absorbed.end_reason = EndReason::censored;
  CHECK(!not_absorbed.validate(spaces).empty());
}
