#pragma once

#include <cstdint>
#include <vector>

#include "jrcr/rng.hpp"
#include "jrcr/scenario.hpp"
#include "jrcr/unit_history.hpp"

namespace jrcr {

struct Cohort {
  StateSpaces spaces;
  std::vector<UnitHistory> units;
  std::uint64_t scenario_fingerprint = 0;

  bool operator==(const Cohort&) const = default;
};

// Discretized Bernoulli-grid generator for the general model. Walks intervals
// [k ds, (k+1) ds), draws one Bernoulli indicator per open channel with the
// per-interval probabilities of the scenario's GridProbMode, resolves
// simultaneous successes uniformly, and records events at the interval's
// right endpoint. Stops at censoring, absorption, or the horizon cap.
UnitHistory simulate_unit_grid(const Scenario& scenario, Rng& rng);

// Exact competing-exponential generator for the Poisson/CTMC special case:
// sojourns are Exponential(C) with C = sum(lambda_0) - eta(w1,w1) - xi(v1,v1),
// and the event type is marked with probabilities lambda_0q/C, eta(w1,w2)/C,
// xi(v1,v)/C. Throws ConfigError when the scenario is not the special case.
UnitHistory simulate_unit_exact_special(const Scenario& scenario, Rng& rng);

// n independent units with per-unit substreams derived from scenario.seed;
// results do not depend on scheduling. threads <= 1 runs serially.
Cohort simulate_cohort(const Scenario& scenario, int n,
                       GeneratorKind kind = GeneratorKind::grid, int threads = 1);

}  // namespace jrcr
