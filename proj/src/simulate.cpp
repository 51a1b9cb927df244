#include "jrcr/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jrcr/design.hpp"
#include "jrcr/errors.hpp"
#include "jrcr/linalg.hpp"
#include "jrcr/parallel.hpp"

namespace jrcr {

namespace {

// Covariates, censoring time, and initial states are drawn up front in a
// fixed order shared by both generators.
struct UnitFrame {
  std::vector<double> covariates;
  double tau = 0.0;
  int lm_state = 0;
  int hs_state = 0;
};

int draw_categorical(Rng& rng, const std::vector<int>& labels,
                     const std::vector<double>& probs) {
  if (probs.empty()) return labels[rng.uniform_int(static_cast<int>(labels.size()))];
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    acc += probs[i];
    if (u < acc) return labels[i];
  }
  return labels.back();
}

UnitFrame draw_frame(const Scenario& sc, Rng& rng) {
  UnitFrame f;
  f.covariates.reserve(sc.covariate_law.size());
  for (const auto& spec : sc.covariate_law) {
    switch (spec.kind) {
      case CovariateSpec::Kind::bernoulli:
        f.covariates.push_back(rng.bernoulli(spec.a) ? 1.0 : 0.0);
        break;
      case CovariateSpec::Kind::normal:
        f.covariates.push_back(spec.a + spec.b * rng.normal());
        break;
      case CovariateSpec::Kind::constant:
        f.covariates.push_back(spec.a);
        break;
    }
  }
  f.tau = rng.exponential(1.0 / sc.censor_mean);
  f.lm_state = draw_categorical(rng, sc.spaces.lm_states(), sc.lm_init_probs);
  f.hs_state = draw_categorical(rng, sc.spaces.hs_transient(), sc.hs_init_probs);
  return f;
}

// Age of type q on the interval starting at s, given the reset times
// maintained by the walk (most recent reset at or before s).
struct ResetTracker {
  double any_event = 0.0;
  double any_rcr = 0.0;
  std::vector<double> own;  // per q

  double age_at(AgePolicy policy, int q, double s) const {
    switch (policy) {
      case AgePolicy::minimal_repair: return s;
      case AgePolicy::perfect_repair_any_event: return s - any_event;
      case AgePolicy::perfect_repair_any_rcr: return s - any_rcr;
      case AgePolicy::perfect_repair_own_type: return s - own[q];
    }
    return s;
  }
  void on_rcr(int q, double t) {
    any_event = any_rcr = own[q] = t;
  }
  void on_transition(double t) { any_event = t; }
};

}  // namespace

UnitHistory simulate_unit_grid(const Scenario& sc, Rng& rng) {
  const StateSpaces& spaces = sc.spaces;
  const int q_count = spaces.q_count();
  const UnitFrame frame = draw_frame(sc, rng);

  UnitHistory unit;
  unit.covariates = frame.covariates;
  unit.lm_initial = frame.lm_state;
  unit.hs_initial = frame.hs_state;
  unit.rcr_times.assign(q_count, {});

  const double stop_time = std::min(frame.tau, sc.s_max);
  int lm = frame.lm_state;
  int hs = frame.hs_state;
  std::vector<int> counts(q_count, 0);
  ResetTracker resets;
  resets.own.assign(q_count, 0.0);

  // One entry per channel open in the current interval.
  struct ChannelDraw {
    int kind;  // 0 rcr, 1 lm, 2 hs
    int q = -1;
    int to_label = -1;
  };
  std::vector<ChannelDraw> hits;

  StateSnapshot snap;
  snap.at_risk = true;
  for (long long k = 0;; ++k) {
    const double s_left = static_cast<double>(k) * sc.ds;
    const double s_right = static_cast<double>(k + 1) * sc.ds;
    if (s_right > stop_time) {
      unit.end_time = stop_time;
      unit.end_reason = EndReason::censored;
      break;
    }

    snap.time = s_left;
    snap.lm_state = lm;
    snap.hs_state = hs;
    snap.rcr_counts = counts;
    const double psi_R =
        std::exp(dot(design_row_R(spaces, snap, unit.covariates), sc.params.theta_R));
    const double psi_W =
        std::exp(dot(design_row_W(spaces, snap, unit.covariates), sc.params.theta_W));
    const double psi_V =
        std::exp(dot(design_row_V(spaces, snap, unit.covariates), sc.params.theta_V));

    auto interval_prob = [&](double rate, const std::string& channel) {
      if (sc.grid_prob == GridProbMode::exp_interval) return -std::expm1(-rate * sc.ds);
      const double p = rate * sc.ds;
      if (p >= 1.0) {
        if (sc.grid_prob == GridProbMode::linear_clamped) return 1.0;
        throw ConfigError("grid simulation: per-interval probability " + std::to_string(p) +
                          " >= 1 for channel " + channel + " in interval [" +
                          std::to_string(s_left) + "," + std::to_string(s_right) +
                          "); decrease ds");
      }
      return p;
    };

    hits.clear();
    for (int q = 0; q < q_count; ++q) {
      const double age = resets.age_at(sc.age_policy, q, s_left);
      const double rate = std::get<WeibullHazard>(sc.params.baseline[q]).hazard(age) *
                          sc.rho->value(counts, q, sc.params.alpha[q]) * psi_R;
      if (rng.bernoulli(interval_prob(rate, "rcr " + std::to_string(q + 1))))
        hits.push_back({0, q, -1});
    }
    const int lm_idx = spaces.lm_index(lm);
    for (int c = 0; c < spaces.lm_count(); ++c) {
      if (c == lm_idx) continue;
      const double rate = sc.params.eta(lm_idx, c) * psi_W;
      if (rng.bernoulli(interval_prob(rate, "lm " + std::to_string(lm) + "->" +
                                                std::to_string(spaces.lm_states()[c]))))
        hits.push_back({1, -1, spaces.lm_states()[c]});
    }
    const int hs_idx = spaces.hs_index(hs);
    for (int c = 0; c < spaces.hs_count(); ++c) {
      if (c == hs_idx) continue;
      const double rate = sc.params.xi(hs_idx, c) * psi_V;
      if (rng.bernoulli(interval_prob(rate, "hs " + std::to_string(hs) + "->" +
                                                std::to_string(spaces.hs_states()[c]))))
        hits.push_back({2, -1, spaces.hs_states()[c]});
    }

    if (hits.empty()) continue;
    const ChannelDraw pick =
        hits.size() == 1 ? hits[0] : hits[rng.uniform_int(static_cast<int>(hits.size()))];

    if (pick.kind == 0) {
      unit.rcr_times[pick.q].push_back(s_right);
      ++counts[pick.q];
      resets.on_rcr(pick.q, s_right);
    } else if (pick.kind == 1) {
      unit.lm_path.push_back({s_right, lm, pick.to_label});
      lm = pick.to_label;
      resets.on_transition(s_right);
    } else {
      unit.hs_path.push_back({s_right, hs, pick.to_label});
      hs = pick.to_label;
      resets.on_transition(s_right);
      if (spaces.is_absorbing(hs)) {
        unit.end_time = s_right;
        unit.end_reason = EndReason::absorbed;
        break;
      }
    }
  }
  return unit;
}

UnitHistory simulate_unit_exact_special(const Scenario& sc, Rng& rng) {
  if (!sc.params.is_special_case())
    throw ConfigError(
        "exact generator requires the special case: unit Weibull shapes, alpha = 1, "
        "all regression coefficients zero");
  const StateSpaces& spaces = sc.spaces;
  const int q_count = spaces.q_count();
  const UnitFrame frame = draw_frame(sc, rng);

  UnitHistory unit;
  unit.covariates = frame.covariates;
  unit.lm_initial = frame.lm_state;
  unit.hs_initial = frame.hs_state;
  unit.rcr_times.assign(q_count, {});

  std::vector<double> lambda0(q_count);
  for (int q = 0; q < q_count; ++q)
    lambda0[q] = 1.0 / std::get<WeibullHazard>(sc.params.baseline[q]).scale;

  const double stop_time = std::min(frame.tau, sc.s_max);
  int lm = frame.lm_state;
  int hs = frame.hs_state;
  double t = 0.0;
  struct Mark {
    double rate;
    int kind;  // 0 rcr, 1 lm, 2 hs
    int q = -1;
    int to_label = -1;
  };
  std::vector<Mark> marks;
  for (;;) {
    const int lm_idx = spaces.lm_index(lm);
    const int hs_idx = spaces.hs_index(hs);
    marks.clear();
    for (int q = 0; q < q_count; ++q)
      if (lambda0[q] > 0.0) marks.push_back({lambda0[q], 0, q, -1});
    for (int c = 0; c < spaces.lm_count(); ++c)
      if (c != lm_idx && sc.params.eta(lm_idx, c) > 0.0)
        marks.push_back({sc.params.eta(lm_idx, c), 1, -1, spaces.lm_states()[c]});
    for (int c = 0; c < spaces.hs_count(); ++c)
      if (c != hs_idx && sc.params.xi(hs_idx, c) > 0.0)
        marks.push_back({sc.params.xi(hs_idx, c), 2, -1, spaces.hs_states()[c]});
    double total = 0.0;
    for (const auto& m : marks) total += m.rate;

    t = total > 0.0 ? t + rng.exponential(total) : stop_time + 1.0;
    if (t > stop_time) {
      unit.end_time = stop_time;
      unit.end_reason = EndReason::censored;
      break;
    }

    // Mark the event type with probabilities rate / total; the last positive
    // channel absorbs any roundoff left by the cumulative walk.
    double u = rng.uniform() * total;
    std::size_t pick = marks.size() - 1;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      u -= marks[i].rate;
      if (u < 0.0) {
        pick = i;
        break;
      }
    }

    const Mark& m = marks[pick];
    if (m.kind == 0) {
      unit.rcr_times[m.q].push_back(t);
    } else if (m.kind == 1) {
      unit.lm_path.push_back({t, lm, m.to_label});
      lm = m.to_label;
    } else {
      unit.hs_path.push_back({t, hs, m.to_label});
      hs = m.to_label;
      if (spaces.is_absorbing(hs)) {
        unit.end_time = t;
        unit.end_reason = EndReason::absorbed;
        break;
      }
    }
  }
  return unit;
}

Cohort simulate_cohort(const Scenario& sc, int n, GeneratorKind kind, int threads) {
  sc.validate();
  if (n < 1) throw std::invalid_argument("simulate_cohort: n must be at least 1");
  Cohort cohort;
  cohort.spaces = sc.spaces;
  cohort.scenario_fingerprint = sc.fingerprint();
  cohort.units.resize(n);
  parallel_for(n, threads, [&](int i) {
    Rng rng(Rng::derive(sc.seed, static_cast<std::uint64_t>(i)));
    cohort.units[i] = kind == GeneratorKind::grid ? simulate_unit_grid(sc, rng)
                                                  : simulate_unit_exact_special(sc, rng);
  });
  return cohort;
}

}  // namespace jrcr
