#pragma once

#include <vector>

namespace jrcr {

// Right-continuous step function: initial value plus the cumulative sum of
// jumps at strictly increasing times. Cumulative hazards start at 0 with
// non-negative jumps; survivor curves start at 1 with negative jumps.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> jump_times, std::vector<double> jump_sizes,
               double initial_value = 0.0);

  double operator()(double t) const;

  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& jump_sizes() const { return sizes_; }
  double initial_value() const { return initial_; }

  bool operator==(const StepFunction&) const = default;

 private:
  std::vector<double> times_, sizes_;
  double initial_ = 0.0;
};

}  // namespace jrcr
