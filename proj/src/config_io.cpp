#include "jrcr/config_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "jrcr/dataset_io.hpp"
#include "jrcr/errors.hpp"

namespace jrcr {

namespace {

struct ConfigMap {
  std::map<std::string, std::vector<std::string>> entries;
  std::map<std::string, int> lines;
  std::string source;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  const std::vector<std::string>& tokens(const std::string& key) {
    used.insert(key);
    auto it = entries.find(key);
    if (it == entries.end())
      throw ConfigError(source + ": missing required key '" + key + "'");
    return it->second;
  }

  std::string scalar(const std::string& key) {
    const auto& t = tokens(key);
    if (t.size() != 1)
      throw ConfigError(source + ": key '" + key + "' expects a single value");
    return t[0];
  }

  double number(const std::string& key) {
    return parse_double_strict(scalar(key), source + ": " + key);
  }

  long long integer(const std::string& key) {
    const std::string s = scalar(key);
    try {
      std::size_t used_chars = 0;
      const long long v = std::stoll(s, &used_chars);
      if (used_chars != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (...) {
      throw ConfigError(source + ": key '" + key + "' expects an integer, got '" + s + "'");
    }
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    for (const auto& t : tokens(key))
      out.push_back(parse_double_strict(t, source + ": " + key));
    return out;
  }

  std::vector<int> integers(const std::string& key) {
    std::vector<int> out;
    for (const auto& t : tokens(key)) {
      try {
        out.push_back(std::stoi(t));
      } catch (...) {
        throw ConfigError(source + ": key '" + key + "' expects integers");
      }
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : entries) {
      if (used.count(key) == 0)
        throw ConfigError(source + ":" + std::to_string(lines.at(key)) +
                          ": unknown key '" + key + "'");
    }
  }

  std::set<std::string> used;
};

ConfigMap parse_config(const std::string& text, const std::string& source) {
  ConfigMap map;
  map.source = source;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::string eq;
    if (!(ss >> eq) || eq != "=")
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": expected 'key = value...'");
    std::vector<std::string> values;
    std::string tok;
    while (ss >> tok) values.push_back(tok);
    if (values.empty())
      throw ConfigError(source + ":" + std::to_string(line_no) + ": key '" + key +
                        "' has no value");
    if (map.entries.count(key))
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" +
                        key + "'");
    map.entries[key] = std::move(values);
    map.lines[key] = line_no;
  }
  return map;
}

CovariateSpec covariate_spec_from(const std::string& tok, const std::string& context) {
  CovariateSpec spec;
  std::vector<std::string> parts;
  std::string cur;
  for (char c : tok) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto num = [&](const std::string& s) { return parse_double_strict(s, context); };
  if (parts[0] == "bernoulli" && parts.size() == 2) {
    spec.kind = CovariateSpec::Kind::bernoulli;
    spec.a = num(parts[1]);
    spec.b = 0.0;
  } else if (parts[0] == "normal" && parts.size() == 3) {
    spec.kind = CovariateSpec::Kind::normal;
    spec.a = num(parts[1]);
    spec.b = num(parts[2]);
  } else if (parts[0] == "constant" && parts.size() == 2) {
    spec.kind = CovariateSpec::Kind::constant;
    spec.a = num(parts[1]);
    spec.b = 0.0;
  } else {
    throw ConfigError(context + ": unknown covariate spec '" + tok +
                      "' (use bernoulli:p, normal:mu:sd, constant:v)");
  }
  return spec;
}

Scenario scenario_from_map(ConfigMap& map) {
  Scenario sc;
  sc.spaces = StateSpaces(map.integers("lm_states"), map.integers("hs_states"),
                          map.integers("hs_absorbing"),
                          static_cast<int>(map.integer("q_count")));
  const int q_count = sc.spaces.q_count();

  ModelParams params;
  for (int q = 1; q <= q_count; ++q) {
    const auto& toks = map.tokens("baseline_" + std::to_string(q));
    const std::string context = map.source + ": baseline_" + std::to_string(q);
    if (toks.size() == 3 && toks[0] == "weibull") {
      params.baseline.push_back(WeibullHazard{parse_double_strict(toks[1], context),
                                              parse_double_strict(toks[2], context)});
    } else if (toks.size() == 2 && toks[0] == "constant") {
      const double rate = parse_double_strict(toks[1], context);
      params.baseline.push_back(WeibullHazard{1.0, 1.0 / rate});
    } else {
      throw ConfigError(context + ": expected 'weibull <shape> <scale>' or 'constant <rate>'");
    }
  }
  params.alpha = map.numbers("alpha");

  auto read_matrix = [&](const char* prefix, int n) {
    Matrix m(n, n);
    for (int r = 1; r <= n; ++r) {
      const auto row = map.numbers(prefix + std::to_string(r));
      if (static_cast<int>(row.size()) != n)
        throw ConfigError(map.source + ": " + prefix + std::to_string(r) + " needs " +
                          std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) m(r - 1, c) = row[c];
    }
    return m;
  };
  params.eta = read_matrix("eta_row_", sc.spaces.lm_count());
  params.xi = read_matrix("xi_row_", sc.spaces.hs_count());
  params.theta_R = map.numbers("theta_R");
  params.theta_W = map.numbers("theta_W");
  params.theta_V = map.numbers("theta_V");
  sc.params = std::move(params);

  if (map.has("covariate_law")) {
    for (const auto& tok : map.tokens("covariate_law"))
      sc.covariate_law.push_back(
          covariate_spec_from(tok, map.source + ": covariate_law"));
  } else {
    map.used.insert("covariate_law");
    sc.covariate_law = {};
  }
  sc.censor_mean = map.number("censor_mean");
  if (map.has("lm_init_probs")) sc.lm_init_probs = map.numbers("lm_init_probs");
  if (map.has("hs_init_probs")) sc.hs_init_probs = map.numbers("hs_init_probs");
  map.used.insert("lm_init_probs");
  map.used.insert("hs_init_probs");
  sc.age_policy = age_policy_from_name(map.scalar("age_policy"));
  if (map.has("rho")) {
    const std::string rho = map.scalar("rho");
    if (rho != "power-log")
      throw ConfigError(map.source + ": unknown rho family '" + rho + "'");
  }
  map.used.insert("rho");
  sc.ds = map.number("ds");
  if (map.has("s_max")) sc.s_max = map.number("s_max");
  map.used.insert("s_max");
  const std::string grid = map.has("grid_prob") ? map.scalar("grid_prob") : "linear";
  map.used.insert("grid_prob");
  if (grid == "linear")
    sc.grid_prob = GridProbMode::linear;
  else if (grid == "linear-clamped")
    sc.grid_prob = GridProbMode::linear_clamped;
  else if (grid == "exp")
    sc.grid_prob = GridProbMode::exp_interval;
  else
    throw ConfigError(map.source +
                      ": grid_prob must be 'linear', 'linear-clamped', or 'exp'");
  if (map.has("seed")) sc.seed = static_cast<std::uint64_t>(map.integer("seed"));
  map.used.insert("seed");
  sc.validate();
  return sc;
}

StudyConfig study_from_map(ConfigMap& map) {
  StudyConfig cfg;
  cfg.scenario = scenario_from_map(map);
  cfg.n = static_cast<int>(map.integer("n"));
  cfg.mreps = static_cast<int>(map.integer("mreps"));
  const std::string mode = map.scalar("fit_mode");
  if (mode == "parametric")
    cfg.mode = FitMode::parametric;
  else if (mode == "semiparametric")
    cfg.mode = FitMode::semiparametric;
  else
    throw ConfigError(map.source + ": fit_mode must be parametric or semiparametric");
  if (map.has("generator")) {
    const std::string gen = map.scalar("generator");
    if (gen == "grid")
      cfg.generator = GeneratorKind::grid;
    else if (gen == "exact")
      cfg.generator = GeneratorKind::exact_special;
    else
      throw ConfigError(map.source + ": generator must be grid or exact");
  }
  map.used.insert("generator");
  if (map.has("lambda_times")) cfg.lambda_times = map.numbers("lambda_times");
  map.used.insert("lambda_times");
  if (map.has("percentiles")) {
    const auto p = map.numbers("percentiles");
    if (p.size() != 2 || !(p[0] < p[1]))
      throw ConfigError(map.source + ": percentiles expects two increasing levels");
    cfg.percentile_lo = p[0];
    cfg.percentile_hi = p[1];
  }
  map.used.insert("percentiles");
  if (map.has("study_seed")) cfg.seed = static_cast<std::uint64_t>(map.integer("study_seed"));
  map.used.insert("study_seed");
  if (map.has("threads")) cfg.threads = static_cast<int>(map.integer("threads"));
  map.used.insert("threads");
  return cfg;
}

}  // namespace

Scenario scenario_from_config_text(const std::string& text, const std::string& source) {
  ConfigMap map = parse_config(text, source);
  Scenario sc = scenario_from_map(map);
  map.finish();
  return sc;
}

Scenario scenario_from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_config_text(ss.str(), path);
}

StudyConfig study_from_config_text(const std::string& text, const std::string& source) {
  ConfigMap map = parse_config(text, source);
  StudyConfig cfg = study_from_map(map);
  map.finish();
  return cfg;
}

StudyConfig study_from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return study_from_config_text(ss.str(), path);
}

std::string scenario_to_config(const Scenario& sc) {
  std::ostringstream out;
  auto list_int = [&](const char* key, const std::vector<int>& v) {
    out << key << " =";
    for (int x : v) out << ' ' << x;
    out << "\n";
  };
  auto list_num = [&](const char* key, const std::vector<double>& v) {
    out << key << " =";
    for (double x : v) out << ' ' << format_double(x);
    out << "\n";
  };
  list_int("lm_states", sc.spaces.lm_states());
  list_int("hs_states", sc.spaces.hs_states());
  std::vector<int> abs;
  for (int s : sc.spaces.hs_states())
    if (sc.spaces.is_absorbing(s)) abs.push_back(s);
  list_int("hs_absorbing", abs);
  out << "q_count = " << sc.spaces.q_count() << "\n";
  for (int q = 0; q < sc.spaces.q_count(); ++q) {
    const auto& w = std::get<WeibullHazard>(sc.params.baseline[q]);
    out << "baseline_" << (q + 1) << " = weibull " << format_double(w.shape) << ' '
        << format_double(w.scale) << "\n";
  }
  list_num("alpha", sc.params.alpha);
  for (int r = 0; r < sc.params.eta.rows(); ++r) {
    out << "eta_row_" << (r + 1) << " =";
    for (int c = 0; c < sc.params.eta.cols(); ++c)
      out << ' ' << format_double(sc.params.eta(r, c));
    out << "\n";
  }
  for (int r = 0; r < sc.params.xi.rows(); ++r) {
    out << "xi_row_" << (r + 1) << " =";
    for (int c = 0; c < sc.params.xi.cols(); ++c)
      out << ' ' << format_double(sc.params.xi(r, c));
    out << "\n";
  }
  list_num("theta_R", sc.params.theta_R);
  list_num("theta_W", sc.params.theta_W);
  list_num("theta_V", sc.params.theta_V);
  if (!sc.covariate_law.empty()) {
    out << "covariate_law =";
    for (const auto& spec : sc.covariate_law) {
      switch (spec.kind) {
        case CovariateSpec::Kind::bernoulli:
          out << " bernoulli:" << format_double(spec.a);
          break;
        case CovariateSpec::Kind::normal:
          out << " normal:" << format_double(spec.a) << ":" << format_double(spec.b);
          break;
        case CovariateSpec::Kind::constant:
          out << " constant:" << format_double(spec.a);
          break;
      }
    }
    out << "\n";
  }
  out << "censor_mean = " << format_double(sc.censor_mean) << "\n";
  out << "age_policy = " << age_policy_name(sc.age_policy) << "\n";
  out << "ds = " << format_double(sc.ds) << "\n";
  out << "s_max = " << format_double(sc.s_max) << "\n";
  out << "grid_prob = "
      << (sc.grid_prob == GridProbMode::linear
              ? "linear"
              : sc.grid_prob == GridProbMode::linear_clamped ? "linear-clamped" : "exp")
      << "\n";
  out << "seed = " << sc.seed << "\n";
  return out.str();
}

namespace {
std::string csv_num(double v) {
  if (!std::isfinite(v)) return "";
  return format_double(v);
}
}  // namespace

std::string study_table_csv(const StudySummary& summary) {
  std::ostringstream out;
  out << "parameter,true,mean,sd,ase,pl,pu,n_used,coverage\n";
  for (const auto& p : summary.params) {
    out << p.name << ',' << csv_num(p.truth) << ',' << csv_num(p.mean) << ','
        << csv_num(p.sd) << ',' << csv_num(p.mean_ase) << ',' << csv_num(p.pl) << ','
        << csv_num(p.pu) << ',' << p.n_used << ',' << csv_num(p.coverage) << "\n";
  }
  return out.str();
}

std::string process_stats_csv(const ProcessStats& stats) {
  std::ostringstream out;
  out << "section,label,mean_count,sd_count,time_per_event,mean_transitions_in,"
         "sd_transitions_in,mean_occupation,sd_occupation,mean_sojourn,sd_sojourn\n";
  for (std::size_t q = 0; q < stats.risks.size(); ++q) {
    const auto& r = stats.risks[q];
    out << "rcr," << (q + 1) << ',' << csv_num(r.mean_count) << ',' << csv_num(r.sd_count)
        << ',' << csv_num(r.time_per_event) << ",,,,,,\n";
  }
  auto states = [&out](const char* section, const std::vector<StateProcessStats>& rows) {
    for (const auto& s : rows) {
      out << section << ',' << s.label << ",,,," << csv_num(s.mean_transitions_in) << ','
          << csv_num(s.sd_transitions_in) << ',' << csv_num(s.mean_occupation) << ','
          << csv_num(s.sd_occupation) << ',' << csv_num(s.mean_sojourn) << ','
          << csv_num(s.sd_sojourn) << "\n";
    }
  };
  states("hs", stats.hs_states);
  states("lm", stats.lm_states);
  return out.str();
}

std::string correlation_csv(const CorrelationCurves& curves) {
  std::ostringstream out;
  out << "s,var1,var2,corr\n";
  for (std::size_t mi = 0; mi < curves.mesh.size(); ++mi) {
    const Matrix& m = curves.mean_corr[mi];
    for (int j = 0; j < m.rows(); ++j)
      for (int k = j + 1; k < m.cols(); ++k)
        out << format_double(curves.mesh[mi]) << ',' << curves.labels[j] << ','
            << curves.labels[k] << ',' << csv_num(m(j, k)) << "\n";
  }
  return out.str();
}

}  // namespace jrcr
