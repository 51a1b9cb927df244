#include "jrcr/semiparam.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Per-type event-age tables: distinct ages with their event mass, plus the
// age index of every type-q event.

struct QTable {
  std::vector<double> ages;  // sorted distinct effective ages with events
  std::vector<double> dn;    // event mass dN(T_l) per age
  std::vector<int> age_idx;  // per event, parallel to grid.rcr_event_idx[q]
};

std::vector<QTable> build_qtables(const EventGrid& grid, double t_star) {
  std::vector<QTable> tables(grid.spaces.q_count());
  for (int q = 0; q < grid.spaces.q_count(); ++q) {
    QTable& tab = tables[q];
    std::vector<double> ages;
    for (int idx : grid.rcr_event_idx[q]) {
      const double age = grid.events[idx].age;
      if (age <= t_star) ages.push_back(age);
    }
    std::sort(ages.begin(), ages.end());
    ages.erase(std::unique(ages.begin(), ages.end()), ages.end());
    tab.ages = std::move(ages);
    tab.dn.assign(tab.ages.size(), 0.0);
    for (int idx : grid.rcr_event_idx[q]) {
      const double age = grid.events[idx].age;
      if (age > t_star) {
        tab.age_idx.push_back(-1);
        continue;
      }
      const int pos = static_cast<int>(
          std::lower_bound(tab.ages.begin(), tab.ages.end(), age) - tab.ages.begin());
      tab.age_idx.push_back(pos);
      tab.dn[pos] += 1.0;
    }
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Batched risk-set evaluation: S_q^0R and its (alpha_q, theta_R) derivatives
// at every age in `ages`, via a difference-array sweep over the segments.

struct RiskArrays {
  std::vector<double> s, sa, saa;   // value, d/dalpha, d2/dalpha2
  std::vector<double> st, sat;      // m x d
  std::vector<double> stt;          // m x d x d
  int d = 0;

  double st_at(int l, int j) const { return st[static_cast<std::size_t>(l) * d + j]; }
  double sat_at(int l, int j) const { return sat[static_cast<std::size_t>(l) * d + j]; }
  double stt_at(int l, int j, int k) const {
    return stt[(static_cast<std::size_t>(l) * d + j) * d + k];
  }
};

RiskArrays sweep_risk_arrays(const EventGrid& grid, int q, double alpha_q,
                             const std::vector<double>& theta,
                             const std::vector<double>& ages) {
  const int m = static_cast<int>(ages.size());
  const int d = static_cast<int>(theta.size());
  RiskArrays out;
  out.d = d;
  out.s.assign(m + 1, 0.0);
  out.sa.assign(m + 1, 0.0);
  out.saa.assign(m + 1, 0.0);
  out.st.assign(static_cast<std::size_t>(m + 1) * d, 0.0);
  out.sat.assign(static_cast<std::size_t>(m + 1) * d, 0.0);
  out.stt.assign(static_cast<std::size_t>(m + 1) * d * d, 0.0);

  for (const Segment& seg : grid.segments) {
    const int lo = static_cast<int>(
        std::upper_bound(ages.begin(), ages.end(), seg.age_left[q]) - ages.begin());
    const int hi = static_cast<int>(
        std::upper_bound(ages.begin(), ages.end(), seg.age_right[q]) - ages.begin());
    if (lo >= hi) continue;

    const double w =
        grid.rho->value(seg.counts, q, alpha_q) * std::exp(dot(seg.row_R, theta));
    const double dlog = grid.rho->dlog(seg.counts, q, alpha_q);
    const double d2log = grid.rho->d2log(seg.counts, q, alpha_q);
    const double wa = w * dlog;
    const double waa = w * (d2log + dlog * dlog);

    auto add = [&](int at, double sign) {
      out.s[at] += sign * w;
      out.sa[at] += sign * wa;
      out.saa[at] += sign * waa;
      double* st_row = &out.st[static_cast<std::size_t>(at) * d];
      double* sat_row = &out.sat[static_cast<std::size_t>(at) * d];
      double* stt_row = &out.stt[static_cast<std::size_t>(at) * d * d];
      for (int j = 0; j < d; ++j) {
        const double bj = seg.row_R[j];
        st_row[j] += sign * w * bj;
        sat_row[j] += sign * wa * bj;
        for (int k = 0; k < d; ++k) stt_row[j * d + k] += sign * w * bj * seg.row_R[k];
      }
    };
    add(lo, +1.0);
    add(hi, -1.0);
  }

  // Prefix sums turn the difference arrays into values at each age.
  for (int l = 1; l < m; ++l) {
    out.s[l] += out.s[l - 1];
    out.sa[l] += out.sa[l - 1];
    out.saa[l] += out.saa[l - 1];
    for (int j = 0; j < d; ++j) {
      out.st[static_cast<std::size_t>(l) * d + j] +=
          out.st[static_cast<std::size_t>(l - 1) * d + j];
      out.sat[static_cast<std::size_t>(l) * d + j] +=
          out.sat[static_cast<std::size_t>(l - 1) * d + j];
    }
    for (int j = 0; j < d * d; ++j)
      out.stt[static_cast<std::size_t>(l) * d * d + j] +=
          out.stt[static_cast<std::size_t>(l - 1) * d * d + j];
  }
  out.s.resize(m);
  out.sa.resize(m);
  out.saa.resize(m);
  out.st.resize(static_cast<std::size_t>(m) * d);
  out.sat.resize(static_cast<std::size_t>(m) * d);
  out.stt.resize(static_cast<std::size_t>(m) * d * d);
  return out;
}

// ---------------------------------------------------------------------------
// Full-layout R-profile assembly: parameters [alpha_1..alpha_Q, theta_R].

struct RAssembly {
  double loglik = 0.0;
  std::vector<double> score;
  Matrix info;
};

RAssembly assemble_R(const EventGrid& grid, const std::vector<QTable>& tables,
                     const std::vector<double>& alpha, const std::vector<double>& theta,
                     bool want_derivatives) {
  const int q_count = grid.spaces.q_count();
  const int d = static_cast<int>(theta.size());
  const int dim = q_count + d;
  RAssembly out;
  out.score.assign(dim, 0.0);
  out.info = Matrix(dim, dim);

  for (int q = 0; q < q_count; ++q) {
    const QTable& tab = tables[q];
    if (tab.ages.empty()) continue;
    const RiskArrays risk = sweep_risk_arrays(grid, q, alpha[q], theta, tab.ages);

    for (std::size_t e = 0; e < grid.rcr_event_idx[q].size(); ++e) {
      const int l = tab.age_idx[e];
      if (l < 0) continue;  // beyond t_star
      const GridEvent& ev = grid.events[grid.rcr_event_idx[q][e]];
      const Segment& seg = grid.segments[ev.segment];
      const double s = risk.s[l];
      out.loglik += std::log(grid.rho->value(seg.counts, q, alpha[q])) +
                    dot(seg.row_R, theta) - std::log(s);
      if (!want_derivatives) continue;

      const double dlog = grid.rho->dlog(seg.counts, q, alpha[q]);
      const double d2log = grid.rho->d2log(seg.counts, q, alpha[q]);
      const double ra = risk.sa[l] / s;
      out.score[q] += dlog - ra;
      out.info(q, q) += -d2log + risk.saa[l] / s - ra * ra;
      for (int j = 0; j < d; ++j) {
        const double rt = risk.st_at(l, j) / s;
        out.score[q_count + j] += seg.row_R[j] - rt;
        out.info(q, q_count + j) += risk.sat_at(l, j) / s - ra * rt;
        out.info(q_count + j, q) = out.info(q, q_count + j);
        for (int k = 0; k <= j; ++k) {
          const double rk = risk.st_at(l, k) / s;
          const double v = risk.stt_at(l, j, k) / s - rt * rk;
          out.info(q_count + j, q_count + k) += v;
        }
      }
    }
  }
  if (want_derivatives) {
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        out.info(grid.spaces.q_count() + j, grid.spaces.q_count() + k) =
            out.info(grid.spaces.q_count() + k, grid.spaces.q_count() + j);
  }
  return out;
}

StepFunction breslow_from_table(const EventGrid& grid, const QTable& tab, int q,
                                double alpha_q, const std::vector<double>& theta_R) {
  if (tab.ages.empty()) return StepFunction();
  const RiskArrays risk = sweep_risk_arrays(grid, q, alpha_q, theta_R, tab.ages);
  std::vector<double> sizes(tab.ages.size());
  for (std::size_t l = 0; l < tab.ages.size(); ++l)
    sizes[l] = risk.s[l] > 0.0 ? tab.dn[l] / risk.s[l] : 0.0;  // 0/0 convention
  return StepFunction(tab.ages, sizes);
}

// ---------------------------------------------------------------------------
// Exponential-family exposure blocks for the W and V profiles.

struct ExposureBlock {
  double s0 = 0.0;
  std::vector<double> ds0;
  Matrix dds0;
};

enum class Component { lm, hs };

// One block per from-state (LM: all states; HS: transient states).
std::vector<ExposureBlock> compute_exposures(const EventGrid& grid, Component comp,
                                             const std::vector<double>& theta) {
  const int d = static_cast<int>(theta.size());
  const int n_states =
      comp == Component::lm ? grid.spaces.lm_count() : grid.spaces.hs_transient_count();
  std::vector<ExposureBlock> blocks(n_states);
  for (auto& b : blocks) {
    b.ds0.assign(d, 0.0);
    b.dds0 = Matrix(d, d);
  }
  for (const Segment& seg : grid.segments) {
    const int state = comp == Component::lm
                          ? grid.spaces.lm_index(seg.lm_state)
                          : grid.spaces.hs_transient_index(seg.hs_state);
    const std::vector<double>& row = comp == Component::lm ? seg.row_W : seg.row_V;
    const double w = seg.duration() * std::exp(dot(row, theta));
    ExposureBlock& b = blocks[state];
    b.s0 += w;
    for (int j = 0; j < d; ++j) {
      b.ds0[j] += w * row[j];
      for (int k = 0; k <= j; ++k) b.dds0(j, k) += w * row[j] * row[k];
    }
  }
  for (auto& b : blocks)
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k) b.dds0(j, k) = b.dds0(k, j);
  return blocks;
}

struct WVAssembly {
  double loglik = 0.0;
  std::vector<double> score;
  Matrix info;
};

WVAssembly assemble_WV(const EventGrid& grid, Component comp,
                       const std::vector<double>& theta, bool want_derivatives) {
  const int d = static_cast<int>(theta.size());
  WVAssembly out;
  out.score.assign(d, 0.0);
  out.info = Matrix(d, d);
  const auto blocks = compute_exposures(grid, comp, theta);

  const auto& event_lists =
      comp == Component::lm ? grid.lm_event_idx_from : grid.hs_event_idx_from;
  for (std::size_t state_pos = 0; state_pos < event_lists.size(); ++state_pos) {
    for (int idx : event_lists[state_pos]) {
      const GridEvent& ev = grid.events[idx];
      const Segment& seg = grid.segments[ev.segment];
      const std::vector<double>& row = comp == Component::lm ? seg.row_W : seg.row_V;
      const int block_idx = comp == Component::lm
                                ? static_cast<int>(state_pos)
                                : grid.spaces.hs_transient_index(ev.from);
      const ExposureBlock& b = blocks[block_idx];
      out.loglik += dot(row, theta) - std::log(b.s0);
      if (!want_derivatives) continue;
      for (int j = 0; j < d; ++j) {
        const double rj = b.ds0[j] / b.s0;
        out.score[j] += row[j] - rj;
        for (int k = 0; k <= j; ++k)
          out.info(j, k) += b.dds0(j, k) / b.s0 - rj * (b.ds0[k] / b.s0);
      }
    }
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) out.info(j, k) = out.info(k, j);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public reference implementations.

S0R risk_set_S0R(const EventGrid& grid, int q, double t, double alpha_q,
                 const std::vector<double>& theta_R) {
  if (t < 0.0) throw std::domain_error("risk_set_S0R: negative age");
  const int d = static_cast<int>(theta_R.size());
  S0R out;
  out.d_theta.assign(d, 0.0);
  out.d2_theta = Matrix(d, d);
  out.d_alpha_theta.assign(d, 0.0);
  for (const Segment& seg : grid.segments) {
    if (!(seg.age_left[q] < t && t <= seg.age_right[q])) continue;
    const double slope = 1.0;  // built-in policies
    const double w =
        grid.rho->value(seg.counts, q, alpha_q) * std::exp(dot(seg.row_R, theta_R)) / slope;
    const double dlog = grid.rho->dlog(seg.counts, q, alpha_q);
    const double d2log = grid.rho->d2log(seg.counts, q, alpha_q);
    out.value += w;
    out.d_alpha += w * dlog;
    out.d2_alpha += w * (d2log + dlog * dlog);
    for (int j = 0; j < d; ++j) {
      out.d_theta[j] += w * seg.row_R[j];
      out.d_alpha_theta[j] += w * dlog * seg.row_R[j];
      for (int k = 0; k < d; ++k) out.d2_theta(j, k) += w * seg.row_R[j] * seg.row_R[k];
    }
  }
  return out;
}

StepFunction breslow_lambda(const EventGrid& grid, int q, double alpha_q,
                            const std::vector<double>& theta_R) {
  const auto tables = build_qtables(grid, std::numeric_limits<double>::infinity());
  return breslow_from_table(grid, tables[q], q, alpha_q, theta_R);
}

EtaXi eta_xi_given_theta(const EventGrid& grid, const std::vector<double>& theta_W,
                         const std::vector<double>& theta_V) {
  const StateSpaces& spaces = grid.spaces;
  EtaXi out;
  out.eta = Matrix(spaces.lm_count(), spaces.lm_count());
  out.xi = Matrix(spaces.hs_count(), spaces.hs_count());

  const auto w_blocks = compute_exposures(grid, Component::lm, theta_W);
  for (int from = 0; from < spaces.lm_count(); ++from) {
    for (int idx : grid.lm_event_idx_from[from]) {
      const int to = spaces.lm_index(grid.events[idx].to);
      if (w_blocks[from].s0 > 0.0) out.eta(from, to) += 1.0 / w_blocks[from].s0;
    }
    double row_sum = 0.0;
    for (int to = 0; to < spaces.lm_count(); ++to) row_sum += out.eta(from, to);
    out.eta(from, from) = -row_sum;
  }

  const auto v_blocks = compute_exposures(grid, Component::hs, theta_V);
  for (int v1 : spaces.hs_transient()) {
    const int from = spaces.hs_index(v1);
    const int block = spaces.hs_transient_index(v1);
    for (int idx : grid.hs_event_idx_from[from]) {
      const int to = spaces.hs_index(grid.events[idx].to);
      if (v_blocks[block].s0 > 0.0) out.xi(from, to) += 1.0 / v_blocks[block].s0;
    }
    double row_sum = 0.0;
    for (int to = 0; to < spaces.hs_count(); ++to) row_sum += out.xi(from, to);
    out.xi(from, from) = -row_sum;
  }
  return out;
}

double profile_loglik_R(const EventGrid& grid, const std::vector<double>& alpha,
                        const std::vector<double>& theta_R) {
  const auto tables = build_qtables(grid, std::numeric_limits<double>::infinity());
  return assemble_R(grid, tables, alpha, theta_R, false).loglik;
}

std::vector<double> profile_score_R(const EventGrid& grid, const std::vector<double>& alpha,
                                    const std::vector<double>& theta_R) {
  const auto tables = build_qtables(grid, std::numeric_limits<double>::infinity());
  return assemble_R(grid, tables, alpha, theta_R, true).score;
}

Matrix profile_info_R(const EventGrid& grid, const std::vector<double>& alpha,
                      const std::vector<double>& theta_R) {
  const auto tables = build_qtables(grid, std::numeric_limits<double>::infinity());
  return assemble_R(grid, tables, alpha, theta_R, true).info;
}

double profile_loglik_W(const EventGrid& grid, const std::vector<double>& theta_W) {
  return assemble_WV(grid, Component::lm, theta_W, false).loglik;
}
std::vector<double> profile_score_W(const EventGrid& grid,
                                    const std::vector<double>& theta_W) {
  return assemble_WV(grid, Component::lm, theta_W, true).score;
}
Matrix profile_info_W(const EventGrid& grid, const std::vector<double>& theta_W) {
  return assemble_WV(grid, Component::lm, theta_W, true).info;
}

double profile_loglik_V(const EventGrid& grid, const std::vector<double>& theta_V) {
  return assemble_WV(grid, Component::hs, theta_V, false).loglik;
}
std::vector<double> profile_score_V(const EventGrid& grid,
                                    const std::vector<double>& theta_V) {
  return assemble_WV(grid, Component::hs, theta_V, true).score;
}
Matrix profile_info_V(const EventGrid& grid, const std::vector<double>& theta_V) {
  return assemble_WV(grid, Component::hs, theta_V, true).info;
}

StepFunction baseline_survivor(const StepFunction& cumulative_hazard, bool* truncated) {
  if (truncated != nullptr) *truncated = false;
  std::vector<double> times, sizes;
  double survivor = 1.0;
  for (std::size_t l = 0; l < cumulative_hazard.jump_times().size(); ++l) {
    const double jump = cumulative_hazard.jump_sizes()[l];
    double next = survivor * (1.0 - jump);
    if (jump >= 1.0) {
      if (truncated != nullptr) *truncated = true;
      next = 0.0;
      times.push_back(cumulative_hazard.jump_times()[l]);
      sizes.push_back(next - survivor);
      break;
    }
    times.push_back(cumulative_hazard.jump_times()[l]);
    sizes.push_back(next - survivor);
    survivor = next;
  }
  return StepFunction(std::move(times), std::move(sizes), 1.0);
}

// ---------------------------------------------------------------------------
// The full fit.

namespace {

Cohort truncate_cohort(const Cohort& cohort, double s_star) {
  Cohort out;
  out.spaces = cohort.spaces;
  out.scenario_fingerprint = cohort.scenario_fingerprint;
  out.units.reserve(cohort.units.size());
  for (UnitHistory u : cohort.units) {
    if (u.end_time > s_star) {
      u.end_time = s_star;
      u.end_reason = EndReason::censored;
      for (auto& v : u.rcr_times)
        v.erase(std::upper_bound(v.begin(), v.end(), s_star), v.end());
      auto cut = [s_star](std::vector<Transition>& path) {
        while (!path.empty() && path.back().time > s_star) path.pop_back();
      };
      cut(u.lm_path);
      cut(u.hs_path);
    }
    out.units.push_back(std::move(u));
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Matrix extract(const Matrix& full, const std::vector<int>& idx) {
  Matrix out(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = full(idx[r], idx[c]);
  return out;
}

}  // namespace

std::vector<std::string> theta_R_names(const StateSpaces& spaces, int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("beta_R_" + std::to_string(j));
  for (int j = 1; j <= spaces.hs_transient_count() - 1; ++j)
    names.push_back("gamma_R_" + std::to_string(j));
  for (int j = 1; j <= spaces.lm_count() - 1; ++j)
    names.push_back("kappa_R_" + std::to_string(j));
  return names;
}
std::vector<std::string> theta_W_names(const StateSpaces& spaces, int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("beta_W_" + std::to_string(j));
  for (int j = 1; j <= spaces.hs_transient_count() - 1; ++j)
    names.push_back("gamma_W_" + std::to_string(j));
  for (int j = 1; j <= spaces.q_count(); ++j) names.push_back("nu_W_" + std::to_string(j));
  return names;
}
std::vector<std::string> theta_V_names(const StateSpaces& spaces, int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("beta_V_" + std::to_string(j));
  for (int j = 1; j <= spaces.lm_count() - 1; ++j)
    names.push_back("kappa_V_" + std::to_string(j));
  for (int j = 1; j <= spaces.q_count(); ++j) names.push_back("nu_V_" + std::to_string(j));
  return names;
}

FitResult fit_semiparametric(const Cohort& cohort, AgePolicy policy,
                             const SemiparamOptions& options) {
  Cohort truncated_storage;
  const Cohort* used = &cohort;
  if (std::isfinite(options.s_star)) {
    truncated_storage = truncate_cohort(cohort, options.s_star);
    used = &truncated_storage;
  }
  const EventGrid grid = build_grid(*used, policy, *options.rho);
  const auto tables = build_qtables(grid, options.t_star);
  const StateSpaces& spaces = grid.spaces;
  const int q_count = spaces.q_count();
  const int d_R = grid.dim_R();
  const int d_W = grid.dim_W();
  const int d_V = grid.dim_V();

  FitResult fit;
  fit.mode = FitMode::semiparametric;
  fit.spaces = spaces;
  fit.covariate_dim = grid.covariate_dim;
  fit.alpha_hat.assign(q_count, 1.0);
  fit.theta_R.assign(d_R, 0.0);
  fit.theta_W.assign(d_W, 0.0);
  fit.theta_V.assign(d_V, 0.0);

  // --- R profile over [log alpha (active types), theta_R] ------------------
  std::vector<int> active_q;
  for (int q = 0; q < q_count; ++q)
    if (!tables[q].ages.empty()) active_q.push_back(q);
  const bool has_R = !active_q.empty();
  const int n_active = static_cast<int>(active_q.size());

  std::vector<double> alpha_se(q_count, kNaN);
  std::vector<double> theta_R_se(d_R, kNaN);
  Matrix info_R_active_inv;     // in the original (alpha, theta) scale
  std::vector<int> active_idx;  // rows of the full layout kept

  if (has_R) {
    for (int q : active_q) active_idx.push_back(q);
    for (int j = 0; j < d_R; ++j) active_idx.push_back(q_count + j);

    auto unpack = [&](const std::vector<double>& x) {
      std::vector<double> alpha(q_count, 1.0);
      for (int i = 0; i < n_active; ++i) alpha[active_q[i]] = std::exp(x[i]);
      std::vector<double> theta(x.begin() + n_active, x.end());
      return std::make_pair(alpha, theta);
    };

    Objective obj;
    obj.dim = n_active + d_R;
    obj.value = [&](const std::vector<double>& x) {
      const auto [alpha, theta] = unpack(x);
      return assemble_R(grid, tables, alpha, theta, false).loglik;
    };
    obj.score_info = [&](const std::vector<double>& x, std::vector<double>& score,
                         Matrix& info) {
      const auto [alpha, theta] = unpack(x);
      const RAssembly a = assemble_R(grid, tables, alpha, theta, true);
      score.assign(obj.dim, 0.0);
      info = Matrix(obj.dim, obj.dim);
      // Chain rule for a = log alpha: U_a = U_alpha * alpha,
      // I_aa = I_alpha,alpha * alpha^2 - U_alpha * alpha, I_a,theta scales by alpha.
      for (int i = 0; i < n_active; ++i) {
        const int q = active_q[i];
        const double aq = alpha[q];
        score[i] = a.score[q] * aq;
        info(i, i) = a.info(q, q) * aq * aq - a.score[q] * aq;
        for (int j = 0; j < d_R; ++j) {
          info(i, n_active + j) = a.info(q, q_count + j) * aq;
          info(n_active + j, i) = info(i, n_active + j);
        }
      }
      for (int j = 0; j < d_R; ++j) {
        score[n_active + j] = a.score[q_count + j];
        for (int k = 0; k < d_R; ++k)
          info(n_active + j, n_active + k) = a.info(q_count + j, q_count + k);
      }
    };

    NewtonResult nr = newton_raphson(obj, std::vector<double>(obj.dim, 0.0), options.newton);
    fit.diag_R = nr.diag;
    const auto [alpha, theta] = unpack(nr.x);
    fit.alpha_hat = alpha;
    fit.theta_R = theta;

    // Observed information at the optimum in the original scale; a singular
    // information (an unidentified direction with a vanishing score) leaves
    // the standard errors flagged rather than failing the fit.
    const RAssembly at_opt = assemble_R(grid, tables, fit.alpha_hat, fit.theta_R, true);
    const Matrix info_active = extract(at_opt.info, active_idx);
    try {
      info_R_active_inv = inverse(info_active);
      for (int i = 0; i < n_active; ++i)
        alpha_se[active_q[i]] = std::sqrt(info_R_active_inv(i, i));
      for (int j = 0; j < d_R; ++j)
        theta_R_se[j] = std::sqrt(info_R_active_inv(n_active + j, n_active + j));
    } catch (const NumericalError&) {
      info_R_active_inv = Matrix();
    }
  } else {
    fit.diag_R.skipped = true;
  }

  // --- W and V profiles -----------------------------------------------------
  auto run_wv = [&](Component comp, int dim, std::vector<double>& theta_out,
                    NewtonDiagnostics& diag) {
    bool any_events = false;
    const auto& lists =
        comp == Component::lm ? grid.lm_event_idx_from : grid.hs_event_idx_from;
    for (const auto& v : lists) any_events = any_events || !v.empty();
    if (!any_events) {
      diag.skipped = true;
      return Matrix();
    }
    Objective obj;
    obj.dim = dim;
    obj.value = [&](const std::vector<double>& x) {
      return assemble_WV(grid, comp, x, false).loglik;
    };
    obj.score_info = [&](const std::vector<double>& x, std::vector<double>& score,
                         Matrix& info) {
      const WVAssembly a = assemble_WV(grid, comp, x, true);
      score = a.score;
      info = a.info;
    };
    NewtonResult nr = newton_raphson(obj, std::vector<double>(dim, 0.0), options.newton);
    diag = nr.diag;
    theta_out = nr.x;
    const WVAssembly at_opt = assemble_WV(grid, comp, theta_out, true);
    try {
      return inverse(at_opt.info);
    } catch (const NumericalError&) {
      return Matrix();  // unidentified direction: SEs stay flagged
    }
  };

  const Matrix info_W_inv = run_wv(Component::lm, d_W, fit.theta_W, fit.diag_W);
  const Matrix info_V_inv = run_wv(Component::hs, d_V, fit.theta_V, fit.diag_V);
  std::vector<double> theta_W_se(d_W, kNaN), theta_V_se(d_V, kNaN);
  if (!info_W_inv.empty())
    for (int j = 0; j < d_W; ++j) theta_W_se[j] = std::sqrt(info_W_inv(j, j));
  if (!info_V_inv.empty())
    for (int j = 0; j < d_V; ++j) theta_V_se[j] = std::sqrt(info_V_inv(j, j));

  // --- Plug-in estimators ----------------------------------------------------
  const EtaXi rates = eta_xi_given_theta(grid, fit.theta_W, fit.theta_V);
  fit.eta_hat = rates.eta;
  fit.xi_hat = rates.xi;
  fit.lambda_hat.resize(q_count);
  for (int q = 0; q < q_count; ++q)
    fit.lambda_hat[q] = breslow_from_table(grid, tables[q], q, fit.alpha_hat[q], fit.theta_R);

  // --- Standard errors for eta/xi: occurrence-exposure term plus the
  // plug-in covariance from theta-hat (the variance decomposition of the
  // occurrence-exposure estimator with an estimated weight function).
  const auto w_blocks = compute_exposures(grid, Component::lm, fit.theta_W);
  const auto v_blocks = compute_exposures(grid, Component::hs, fit.theta_V);

  auto rate_se = [](double rate, const ExposureBlock& block, const Matrix& info_inv,
                    bool have_info) {
    // var = rate/S0 + (rate/S0)^2 g' I^-1 g, g = dS0/dtheta.
    if (rate <= 0.0 || block.s0 <= 0.0) return kNaN;
    double var = rate / block.s0;
    if (have_info && !info_inv.empty()) {
      const double scale = rate / block.s0;
      double quad = 0.0;
      for (int j = 0; j < info_inv.rows(); ++j)
        for (int k = 0; k < info_inv.cols(); ++k)
          quad += block.ds0[j] * info_inv(j, k) * block.ds0[k];
      var += scale * scale * quad;
    }
    return std::sqrt(var);
  };

  // --- Pointwise variances of the baseline cumulative hazards ---------------
  const int n_times = static_cast<int>(options.lambda_times.size());
  fit.lambda_eval_times = options.lambda_times;
  fit.lambda_se_naive = Matrix(q_count, n_times, kNaN);
  fit.lambda_se_full = Matrix(q_count, n_times, kNaN);
  if (has_R) {
    const int dim_active = n_active + d_R;
    const bool have_info = !info_R_active_inv.empty();
    for (int qi = 0; qi < n_active; ++qi) {
      const int q = active_q[qi];
      const QTable& tab = tables[q];
      const RiskArrays risk =
          sweep_risk_arrays(grid, q, fit.alpha_hat[q], fit.theta_R, tab.ages);
      for (int ti = 0; ti < n_times; ++ti) {
        const double t = options.lambda_times[ti];
        double naive = 0.0;
        std::vector<double> b(dim_active, 0.0);
        for (std::size_t l = 0; l < tab.ages.size() && tab.ages[l] <= t; ++l) {
          const double s = risk.s[l];
          if (s <= 0.0) continue;
          naive += tab.dn[l] / (s * s);
          b[qi] -= tab.dn[l] * risk.sa[l] / (s * s);
          for (int j = 0; j < d_R; ++j)
            b[n_active + j] -= tab.dn[l] * risk.st_at(l, j) / (s * s);
        }
        fit.lambda_se_naive(q, ti) = std::sqrt(naive);
        if (have_info) {
          double full = naive;
          for (int r = 0; r < dim_active; ++r)
            for (int c = 0; c < dim_active; ++c)
              full += b[r] * info_R_active_inv(r, c) * b[c];
          fit.lambda_se_full(q, ti) = std::sqrt(full);
        }
      }
    }
  }

  // --- Named estimates -------------------------------------------------------
  for (int q = 0; q < q_count; ++q) {
    Estimate e;
    e.name = "alpha_" + std::to_string(q + 1);
    e.value = fit.alpha_hat[q];
    e.se = alpha_se[q];
    e.se_valid = std::isfinite(alpha_se[q]);
    e.null_value = 1.0;
    fit.estimates.push_back(std::move(e));
  }
  auto push_theta = [&fit](const std::vector<std::string>& names,
                           const std::vector<double>& values,
                           const std::vector<double>& ses) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      Estimate e;
      e.name = names[j];
      e.value = values[j];
      e.se = ses[j];
      e.se_valid = std::isfinite(ses[j]);
      fit.estimates.push_back(std::move(e));
    }
  };
  push_theta(theta_R_names(spaces, grid.covariate_dim), fit.theta_R, theta_R_se);
  push_theta(theta_W_names(spaces, grid.covariate_dim), fit.theta_W, theta_W_se);
  push_theta(theta_V_names(spaces, grid.covariate_dim), fit.theta_V, theta_V_se);

  fit.eta_se_plain = Matrix(spaces.lm_count(), spaces.lm_count(), kNaN);
  fit.xi_se_plain = Matrix(spaces.hs_count(), spaces.hs_count(), kNaN);
  for (const auto& [w1, w2] : spaces.lm_pairs()) {
    const int r = spaces.lm_index(w1), c = spaces.lm_index(w2);
    Estimate e;
    e.name = eta_name(w1, w2);
    e.value = fit.eta_hat(r, c);
    e.se = rate_se(e.value, w_blocks[r], info_W_inv, !fit.diag_W.skipped);
    e.se_valid = std::isfinite(e.se);
    const double count = e.value * w_blocks[r].s0;  // jumps / exposure * exposure
    if (count > 0.0) fit.eta_se_plain(r, c) = e.value / std::sqrt(count);
    fit.estimates.push_back(std::move(e));
  }
  for (const auto& [v1, v] : spaces.hs_pairs()) {
    const int r = spaces.hs_index(v1), c = spaces.hs_index(v);
    Estimate e;
    e.name = xi_name(v1, v);
    e.value = fit.xi_hat(r, c);
    const ExposureBlock& block = v_blocks[spaces.hs_transient_index(v1)];
    e.se = rate_se(e.value, block, info_V_inv, !fit.diag_V.skipped);
    e.se_valid = std::isfinite(e.se);
    const double count = e.value * block.s0;
    if (count > 0.0) fit.xi_se_plain(r, c) = e.value / std::sqrt(count);
    fit.estimates.push_back(std::move(e));
  }

  for (int q = 0; q < q_count; ++q) {
    for (int ti = 0; ti < n_times; ++ti) {
      Estimate e;
      e.name = "Lambda0_" + std::to_string(q + 1) + "(" +
               fmt_double(options.lambda_times[ti]) + ")";
      e.value = fit.lambda_hat[q](options.lambda_times[ti]);
      e.se = fit.lambda_se_full(q, ti);
      e.se_valid = std::isfinite(e.se);
      fit.estimates.push_back(std::move(e));
    }
  }
  return fit;
}

}  // namespace jrcr
