#include "jrcr/step_function.hpp"

#include <algorithm>

#include "jrcr/errors.hpp"

namespace jrcr {

StepFunction::StepFunction(std::vector<double> jump_times, std::vector<double> jump_sizes,
                           double initial_value)
    : times_(std::move(jump_times)), sizes_(std::move(jump_sizes)), initial_(initial_value) {
  if (times_.size() != sizes_.size())
    throw ConfigError("step function: times/sizes length mismatch");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i - 1] < times_[i]))
      throw ConfigError("step function: jump times must be strictly increasing");
}

double StepFunction::operator()(double t) const {
  const auto n = static_cast<std::size_t>(
      std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  double v = initial_;
  for (std::size_t i = 0; i < n; ++i) v += sizes_[i];
  return v;
}

}  // namespace jrcr
