#pragma once

#include <iosfwd>
#include <string>

#include "jrcr/simulate.hpp"

namespace jrcr {

// Line-oriented dataset file. Times are written as shortest-round-trip
// decimal strings so that parse(serialize(cohort)) reproduces the cohort
// bit-exactly.
//
//   jrcr-dataset v1
//   lm_states 1 2 3
//   hs_states 1 2 3
//   hs_absorbing 1
//   q_count 3
//   covariate_names x1 x2
//   unit 1
//   covariates 1 -0.32774080000000002
//   initial 2 3
//   record 0.125 rcr 1
//   record 0.25 lm 1 2
//   record 0.5 hs 3 2
//   record 1.5 end censored
//   unit 2
//   ...
void serialize_dataset(const Cohort& cohort, std::ostream& out);
std::string serialize_dataset(const Cohort& cohort);

// Parses and validates; throws ValidationError with one line-referenced
// diagnostic per violation.
Cohort parse_dataset(std::istream& in, const std::string& source = "<stream>");
Cohort parse_dataset_file(const std::string& path);
void write_dataset_file(const Cohort& cohort, const std::string& path);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);
double parse_double_strict(const std::string& tok, const std::string& context);

}  // namespace jrcr
