#include "jrcr/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "jrcr/errors.hpp"

namespace jrcr {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double_strict(const std::string& tok, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ConfigError(context + ": malformed number '" + tok + "'");
  return v;
}

void serialize_dataset(const Cohort& cohort, std::ostream& out) {
  const StateSpaces& spaces = cohort.spaces;
  out << "jrcr-dataset v1\n";
  out << "lm_states";
  for (int s : spaces.lm_states()) out << ' ' << s;
  out << "\nhs_states";
  for (int s : spaces.hs_states()) out << ' ' << s;
  out << "\nhs_absorbing";
  for (int s : spaces.hs_states())
    if (spaces.is_absorbing(s)) out << ' ' << s;
  out << "\nq_count " << spaces.q_count() << "\n";
  if (cohort.scenario_fingerprint != 0)
    out << "fingerprint " << cohort.scenario_fingerprint << "\n";
  const int p =
      cohort.units.empty() ? 0 : static_cast<int>(cohort.units[0].covariates.size());
  out << "covariate_names";
  for (int j = 1; j <= p; ++j) out << " x" << j;
  out << "\n";

  for (std::size_t i = 0; i < cohort.units.size(); ++i) {
    const UnitHistory& u = cohort.units[i];
    out << "unit " << (i + 1) << "\n";
    out << "covariates";
    for (double x : u.covariates) out << ' ' << format_double(x);
    out << "\ninitial " << u.lm_initial << ' ' << u.hs_initial << "\n";

    // Merge the per-type and transition records in time order.
    struct Rec {
      double time;
      int kind;  // 0 rcr, 1 lm, 2 hs
      int a = 0, b = 0;
    };
    std::vector<Rec> recs;
    for (std::size_t q = 0; q < u.rcr_times.size(); ++q)
      for (double t : u.rcr_times[q]) recs.push_back({t, 0, static_cast<int>(q) + 1, 0});
    for (const auto& tr : u.lm_path) recs.push_back({tr.time, 1, tr.from, tr.to});
    for (const auto& tr : u.hs_path) recs.push_back({tr.time, 2, tr.from, tr.to});
    std::sort(recs.begin(), recs.end(),
              [](const Rec& a, const Rec& b) { return a.time < b.time; });
    for (const auto& r : recs) {
      out << "record " << format_double(r.time);
      if (r.kind == 0)
        out << " rcr " << r.a;
      else if (r.kind == 1)
        out << " lm " << r.a << ' ' << r.b;
      else
        out << " hs " << r.a << ' ' << r.b;
      out << "\n";
    }
    out << "record " << format_double(u.end_time) << " end "
        << (u.end_reason == EndReason::censored ? "censored" : "absorbed") << "\n";
  }
}

std::string serialize_dataset(const Cohort& cohort) {
  std::ostringstream out;
  serialize_dataset(cohort, out);
  return out.str();
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

struct Parser {
  std::istream& in;
  std::string source;
  std::vector<std::string> violations;
  int line_no = 0;

  void complain(const std::string& msg) {
    violations.push_back(source + ":" + std::to_string(line_no) + ": " + msg);
  }
};

}  // namespace

Cohort parse_dataset(std::istream& in, const std::string& source) {
  Parser ps{in, source, {}, 0};
  std::string line;
  auto next_line = [&](std::vector<std::string>& toks) {
    while (std::getline(ps.in, line)) {
      ++ps.line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '#') continue;
      toks = tokens_of(line);
      if (!toks.empty()) return true;
    }
    return false;
  };
  auto to_int = [&](const std::string& t, const char* what) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (...) {
      ps.complain(std::string("malformed ") + what + " '" + t + "'");
      return 0;
    }
  };

  std::vector<std::string> toks;
  if (!next_line(toks) || toks[0] != "jrcr-dataset" || toks.size() != 2 || toks[1] != "v1")
    throw ValidationError({source + ":1: not a jrcr-dataset v1 file"});

  std::vector<int> lm_states, hs_states, hs_absorbing;
  int q_count = 0;
  int p = 0;
  auto read_header_list = [&](const char* key, std::vector<int>& dst) {
    if (!next_line(toks) || toks[0] != key) {
      ps.complain(std::string("expected '") + key + "' line");
      return;
    }
    for (std::size_t j = 1; j < toks.size(); ++j) dst.push_back(to_int(toks[j], key));
  };
  read_header_list("lm_states", lm_states);
  read_header_list("hs_states", hs_states);
  read_header_list("hs_absorbing", hs_absorbing);
  if (next_line(toks) && toks[0] == "q_count" && toks.size() == 2)
    q_count = to_int(toks[1], "q_count");
  else
    ps.complain("expected 'q_count <n>'");
  std::uint64_t fingerprint = 0;
  if (!next_line(toks)) {
    ps.complain("expected 'covariate_names ...'");
  } else {
    if (toks[0] == "fingerprint" && toks.size() == 2) {
      fingerprint = std::strtoull(toks[1].c_str(), nullptr, 10);
      if (!next_line(toks)) toks = {};
    }
    if (toks.empty() || toks[0] != "covariate_names")
      ps.complain("expected 'covariate_names ...'");
    else
      p = static_cast<int>(toks.size()) - 1;
  }
  if (!ps.violations.empty()) throw ValidationError(std::move(ps.violations));

  Cohort cohort;
  cohort.scenario_fingerprint = fingerprint;
  try {
    cohort.spaces = StateSpaces(lm_states, hs_states, hs_absorbing, q_count);
  } catch (const ConfigError& e) {
    throw ValidationError({source + ": " + e.what()});
  }

  UnitHistory unit;
  bool in_unit = false, have_end = false, have_initial = false;
  double last_time = 0.0;
  int unit_first_line = 0;

  auto finish_unit = [&]() {
    if (!in_unit) return;
    if (!have_end)
      ps.complain("unit starting at line " + std::to_string(unit_first_line) +
                  " has no end record");
    if (!have_initial)
      ps.complain("unit starting at line " + std::to_string(unit_first_line) +
                  " has no initial line");
    for (const auto& v : unit.validate(cohort.spaces))
      ps.complain("unit starting at line " + std::to_string(unit_first_line) + ": " + v);
    cohort.units.push_back(unit);
  };

  while (next_line(toks)) {
    const std::string& key = toks[0];
    if (key == "unit") {
      finish_unit();
      unit = UnitHistory();
      unit.rcr_times.assign(q_count, {});
      in_unit = true;
      have_end = have_initial = false;
      last_time = 0.0;
      unit_first_line = ps.line_no;
      continue;
    }
    if (!in_unit) {
      ps.complain("'" + key + "' outside a unit block");
      continue;
    }
    if (key == "covariates") {
      if (static_cast<int>(toks.size()) - 1 != p)
        ps.complain("expected " + std::to_string(p) + " covariate values");
      unit.covariates.clear();
      for (std::size_t j = 1; j < toks.size(); ++j) {
        try {
          unit.covariates.push_back(parse_double_strict(toks[j], "covariates"));
        } catch (const ConfigError& e) {
          ps.complain(e.what());
        }
      }
    } else if (key == "initial") {
      if (toks.size() != 3) {
        ps.complain("expected 'initial <lm> <hs>'");
        continue;
      }
      unit.lm_initial = to_int(toks[1], "initial LM state");
      unit.hs_initial = to_int(toks[2], "initial HS state");
      have_initial = true;
    } else if (key == "record") {
      if (toks.size() < 3) {
        ps.complain("malformed record");
        continue;
      }
      if (have_end) {
        ps.complain("record after the end record");
        continue;
      }
      double t = 0.0;
      try {
        t = parse_double_strict(toks[1], "record time");
      } catch (const ConfigError& e) {
        ps.complain(e.what());
        continue;
      }
      const std::string& kind = toks[2];
      if (kind != "end" && t <= last_time)
        ps.complain("record times not strictly increasing");
      if (kind == "rcr") {
        if (toks.size() != 4) {
          ps.complain("expected 'record <t> rcr <q>'");
          continue;
        }
        const int q = to_int(toks[3], "risk index");
        if (q < 1 || q > q_count) {
          ps.complain("risk index " + std::to_string(q) + " outside 1.." +
                      std::to_string(q_count));
          continue;
        }
        unit.rcr_times[q - 1].push_back(t);
        last_time = t;
      } else if (kind == "lm" || kind == "hs") {
        if (toks.size() != 5) {
          ps.complain("expected 'record <t> " + kind + " <from> <to>'");
          continue;
        }
        const Transition tr{t, to_int(toks[3], "state"), to_int(toks[4], "state")};
        (kind == "lm" ? unit.lm_path : unit.hs_path).push_back(tr);
        last_time = t;
      } else if (kind == "end") {
        if (toks.size() != 4 || (toks[3] != "censored" && toks[3] != "absorbed")) {
          ps.complain("expected 'record <t> end censored|absorbed'");
          continue;
        }
        unit.end_time = t;
        unit.end_reason = toks[3] == "censored" ? EndReason::censored : EndReason::absorbed;
        have_end = true;
      } else {
        ps.complain("unknown record kind '" + kind + "'");
      }
    } else {
      ps.complain("unknown line '" + key + "'");
    }
  }
  finish_unit();
  if (!ps.violations.empty()) throw ValidationError(std::move(ps.violations));
  return cohort;
}

Cohort parse_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  return parse_dataset(in, path);
}

void write_dataset_file(const Cohort& cohort, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  serialize_dataset(cohort, out);
}

}  // namespace jrcr
