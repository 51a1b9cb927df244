#include "jrcr/replication.hpp"

#include <algorithm>
#include <cmath>

#include "jrcr/errors.hpp"
#include "jrcr/parallel.hpp"
#include "jrcr/parametric.hpp"

namespace jrcr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quantile(std::vector<double> sorted, double p) {
  if (sorted.empty()) return kNaN;
  const double h = (sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

struct Welford {
  long long n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double sd() const { return n > 1 ? std::sqrt(m2 / (n - 1)) : kNaN; }
  double sd_population() const { return n > 0 ? std::sqrt(m2 / n) : kNaN; }
};

// True parameter values implied by the generating scenario.
double truth_for(const std::string& name, const Scenario& sc, FitMode mode) {
  const StateSpaces& spaces = sc.spaces;
  const int p = sc.covariate_dim();
  auto index_in = [](const std::vector<std::string>& names, const std::string& key) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == key) return static_cast<int>(i);
    return -1;
  };
  if (name.rfind("alpha_", 0) == 0) return sc.params.alpha[std::stoi(name.substr(6)) - 1];
  if (name.rfind("lambda0_", 0) == 0) {
    const auto& b = sc.params.baseline[std::stoi(name.substr(8)) - 1];
    if (const auto* w = std::get_if<WeibullHazard>(&b))
      if (w->shape == 1.0) return 1.0 / w->scale;
    return kNaN;
  }
  if (name.rfind("Lambda0_", 0) == 0) {
    const auto open = name.find('(');
    const int q = std::stoi(name.substr(8, open - 8)) - 1;
    const double t = std::stod(name.substr(open + 1, name.size() - open - 2));
    return baseline_cumulative(sc.params.baseline[q], t);
  }
  if (name.rfind("eta(", 0) == 0) {
    const auto comma = name.find(',');
    const int from = std::stoi(name.substr(4, comma - 4));
    const int to = std::stoi(name.substr(comma + 1, name.size() - comma - 2));
    return sc.params.eta(spaces.lm_index(from), spaces.lm_index(to));
  }
  if (name.rfind("xi(", 0) == 0) {
    const auto comma = name.find(',');
    const int from = std::stoi(name.substr(3, comma - 3));
    const int to = std::stoi(name.substr(comma + 1, name.size() - comma - 2));
    return sc.params.xi(spaces.hs_index(from), spaces.hs_index(to));
  }
  if (mode == FitMode::semiparametric) {
    int idx = index_in(theta_R_names(spaces, p), name);
    if (idx >= 0) return sc.params.theta_R[idx];
    idx = index_in(theta_W_names(spaces, p), name);
    if (idx >= 0) return sc.params.theta_W[idx];
    idx = index_in(theta_V_names(spaces, p), name);
    if (idx >= 0) return sc.params.theta_V[idx];
  }
  return kNaN;
}

}  // namespace

std::vector<double> default_correlation_mesh() {
  std::vector<double> mesh(61);
  for (int i = 0; i < 61; ++i) mesh[i] = 3.0 * i / 60.0;
  return mesh;
}

ProcessStats summarize_processes(const std::vector<Cohort>& cohorts) {
  if (cohorts.empty()) throw ConfigError("summarize_processes: no cohorts");
  const StateSpaces& spaces = cohorts[0].spaces;
  for (const auto& c : cohorts)
    if (!(c.spaces == spaces))
      throw ConfigError("summarize_processes: cohorts declare different state spaces");
  const int q_count = spaces.q_count();

  ProcessStats out;
  out.risks.resize(q_count);
  std::vector<Welford> count_acc(q_count);
  double total_time = 0.0;
  std::vector<double> total_events(q_count, 0.0);

  struct StateAcc {
    Welford transitions_in, occupation, sojourn;
    double total_occ = 0.0, total_in = 0.0;
  };
  std::vector<StateAcc> hs_acc(spaces.hs_count()), lm_acc(spaces.lm_count());
  Welford end_time_acc;
  long long absorbed = 0;

  for (const auto& cohort : cohorts) {
    for (const auto& u : cohort.units) {
      ++out.units;
      end_time_acc.add(u.end_time);
      if (u.end_reason == EndReason::absorbed) ++absorbed;
      total_time += u.end_time;
      for (int q = 0; q < q_count; ++q) {
        const double k = static_cast<double>(u.rcr_times[q].size());
        count_acc[q].add(k);
        total_events[q] += k;
      }

      auto walk = [&](const std::vector<Transition>& path, int initial,
                      std::vector<StateAcc>& acc, auto index_of) {
        std::vector<double> occ(acc.size(), 0.0);
        std::vector<double> trans_in(acc.size(), 0.0);
        double prev = 0.0;
        int state = index_of(initial);
        for (const auto& tr : path) {
          occ[state] += tr.time - prev;
          const int to = index_of(tr.to);
          trans_in[to] += 1.0;
          acc[to].total_in += 1.0;
          prev = tr.time;
          state = to;
        }
        occ[state] += u.end_time - prev;
        for (std::size_t j = 0; j < acc.size(); ++j) {
          acc[j].occupation.add(occ[j]);
          acc[j].transitions_in.add(trans_in[j]);
          acc[j].total_occ += occ[j];
        }
        // Sojourn samples: visits entered by a transition, truncation included.
        prev = 0.0;
        state = index_of(initial);
        bool entered = false;
        for (const auto& tr : path) {
          if (entered) acc[state].sojourn.add(tr.time - prev);
          prev = tr.time;
          state = index_of(tr.to);
          entered = true;
        }
        if (entered) acc[state].sojourn.add(u.end_time - prev);
      };
      walk(u.hs_path, u.hs_initial, hs_acc, [&](int l) { return spaces.hs_index(l); });
      walk(u.lm_path, u.lm_initial, lm_acc, [&](int l) { return spaces.lm_index(l); });
    }
  }

  for (int q = 0; q < q_count; ++q) {
    out.risks[q].mean_count = count_acc[q].mean;
    out.risks[q].sd_count = count_acc[q].sd_population();
    out.risks[q].time_per_event =
        total_events[q] > 0 ? total_time / total_events[q] : kNaN;
  }
  auto emit = [&](const std::vector<StateAcc>& acc, const std::vector<int>& labels,
                  bool hs) {
    std::vector<StateProcessStats> rows;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (hs && spaces.is_absorbing(labels[j])) continue;  // not reported
      const StateAcc& a = acc[hs ? spaces.hs_index(labels[j]) : j];
      StateProcessStats row;
      row.label = labels[j];
      row.mean_transitions_in = a.transitions_in.mean;
      row.sd_transitions_in = a.transitions_in.sd_population();
      row.mean_occupation = a.occupation.mean;
      row.sd_occupation = a.occupation.sd_population();
      row.mean_sojourn = a.total_in > 0 ? a.total_occ / a.total_in : kNaN;
      row.sd_sojourn = a.sojourn.sd_population();
      rows.push_back(row);
    }
    return rows;
  };
  out.hs_states = emit(hs_acc, spaces.hs_states(), true);
  out.lm_states = emit(lm_acc, spaces.lm_states(), false);
  out.mean_end_time = end_time_acc.mean;
  out.absorbed_fraction = static_cast<double>(absorbed) / static_cast<double>(out.units);
  return out;
}

CorrelationCurves correlation_trajectories(const std::vector<Cohort>& cohorts,
                                           const std::vector<double>& mesh) {
  if (cohorts.empty()) throw ConfigError("correlation_trajectories: no cohorts");
  const StateSpaces& spaces = cohorts[0].spaces;
  const int q_count = spaces.q_count();

  CorrelationCurves out;
  out.mesh = mesh;
  std::vector<int> hs_ind;  // transient states except the last
  for (int j = 0; j + 1 < spaces.hs_transient_count(); ++j)
    hs_ind.push_back(spaces.hs_transient()[j]);
  std::vector<int> lm_ind;  // states except the first
  for (int j = 1; j < spaces.lm_count(); ++j) lm_ind.push_back(spaces.lm_states()[j]);
  for (int v : hs_ind) out.labels.push_back("V=" + std::to_string(v));
  for (int w : lm_ind) out.labels.push_back("W=" + std::to_string(w));
  for (int q = 1; q <= q_count; ++q) out.labels.push_back("N" + std::to_string(q));
  const int dim = static_cast<int>(out.labels.size());

  // Element-wise mean of per-cohort correlation matrices, NaN-aware.
  std::vector<Matrix> sum(mesh.size(), Matrix(dim, dim));
  std::vector<Matrix> cnt(mesh.size(), Matrix(dim, dim));

  std::vector<double> z(dim);
  for (const auto& cohort : cohorts) {
    const int n = static_cast<int>(cohort.units.size());
    for (std::size_t mi = 0; mi < mesh.size(); ++mi) {
      const double s = mesh[mi];
      // Accumulate the n x dim summary matrix moments.
      std::vector<double> m1(dim, 0.0);
      Matrix m2(dim, dim);
      for (const auto& u : cohort.units) {
        // Right-continuous state at s, carried forward past the end of
        // monitoring.
        const double probe = std::nextafter(s, std::numeric_limits<double>::infinity());
        const int v_state = u.hs_state_before(probe);
        const int w_state = u.lm_state_before(probe);
        const auto counts = u.rcr_counts_before(probe);
        int pos = 0;
        for (int v : hs_ind) z[pos++] = v_state == v ? 1.0 : 0.0;
        for (int w : lm_ind) z[pos++] = w_state == w ? 1.0 : 0.0;
        for (int q = 0; q < q_count; ++q) z[pos++] = counts[q];
        for (int j = 0; j < dim; ++j) {
          m1[j] += z[j];
          for (int k = 0; k <= j; ++k) m2(j, k) += z[j] * z[k];
        }
      }
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k <= j; ++k) {
          const double cov = m2(j, k) / n - (m1[j] / n) * (m1[k] / n);
          const double var_j = m2(j, j) / n - (m1[j] / n) * (m1[j] / n);
          const double var_k = m2(k, k) / n - (m1[k] / n) * (m1[k] / n);
          if (var_j <= 0.0 || var_k <= 0.0) continue;  // constant column: flagged
          const double corr = cov / std::sqrt(var_j * var_k);
          sum[mi](j, k) += corr;
          cnt[mi](j, k) += 1.0;
          if (k != j) {
            sum[mi](k, j) += corr;
            cnt[mi](k, j) += 1.0;
          }
        }
    }
  }
  out.mean_corr.assign(mesh.size(), Matrix(dim, dim, kNaN));
  for (std::size_t mi = 0; mi < mesh.size(); ++mi)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (cnt[mi](j, k) > 0.0) out.mean_corr[mi](j, k) = sum[mi](j, k) / cnt[mi](j, k);
  return out;
}

StudySummary run_study(const StudyConfig& config) {
  if (config.mreps < 1) throw ConfigError("run_study: mreps must be at least 1");
  config.scenario.validate();

  StudySummary summary;
  summary.config = config;
  summary.mreps = config.mreps;

  std::vector<std::vector<Estimate>> results(config.mreps);
  std::vector<Cohort> cohorts(config.mreps);
  std::vector<char> ok(config.mreps, 0);

  parallel_for(config.mreps, config.threads, [&](int r) {
    Scenario sc = config.scenario;
    sc.seed = Rng::derive(config.seed, static_cast<std::uint64_t>(r));
    cohorts[r] = simulate_cohort(sc, config.n, config.generator, 1);
    try {
      if (config.mode == FitMode::parametric) {
        FitResult fit = fit_special_case(cohorts[r]);
        results[r] = std::move(fit.estimates);
        ok[r] = 1;
      } else {
        SemiparamOptions opts;
        opts.lambda_times = config.lambda_times;
        FitResult fit = fit_semiparametric(cohorts[r], sc.age_policy, opts);
        if (fit.converged()) {
          results[r] = std::move(fit.estimates);
          ok[r] = 1;
        }
      }
    } catch (const NumericalError&) {
      // counted as a failure below
    }
  });

  // Names from the first successful replication define the table rows.
  int first_ok = -1;
  for (int r = 0; r < config.mreps; ++r)
    if (ok[r]) {
      first_ok = r;
      break;
    }
  if (first_ok < 0) throw NumericalError("run_study: every replication failed");

  for (const auto& proto : results[first_ok]) {
    ParamSummary row;
    row.name = proto.name;
    row.truth = truth_for(proto.name, config.scenario, config.mode);
    std::vector<double> values;
    Welford w_val, w_ase;
    long long covered = 0, cover_n = 0;
    for (int r = 0; r < config.mreps; ++r) {
      if (!ok[r]) continue;
      for (const auto& e : results[r]) {
        if (e.name != proto.name) continue;
        values.push_back(e.value);
        w_val.add(e.value);
        if (e.se_valid) {
          w_ase.add(e.se);
          if (std::isfinite(row.truth)) {
            ++cover_n;
            if (std::abs(e.value - row.truth) <= 1.959963984540054 * e.se) ++covered;
          }
        }
        break;
      }
    }
    row.n_used = static_cast<int>(values.size());
    row.n_ase = static_cast<int>(w_ase.n);
    row.mean = w_val.mean;
    row.sd = w_val.sd();  // sample SD; flagged NaN when Mreps == 1
    row.mean_ase = w_ase.n > 0 ? w_ase.mean : kNaN;
    std::sort(values.begin(), values.end());
    row.pl = quantile(values, config.percentile_lo);
    row.pu = quantile(values, config.percentile_hi);
    row.coverage = cover_n > 0 ? static_cast<double>(covered) / cover_n : kNaN;
    summary.params.push_back(std::move(row));
  }

  for (int r = 0; r < config.mreps; ++r)
    if (!ok[r]) ++summary.failures;

  summary.processes = summarize_processes(cohorts);
  summary.correlations = correlation_trajectories(cohorts, default_correlation_mesh());
  return summary;
}

}  // namespace jrcr
