#include "pdmp/step_function.hpp"

#include <algorithm>

#include "pdmp/errors.hpp"

namespace pdmp {

StepFunction::StepFunction(std::vector<double> jump_times, std::vector<double> values,
                           double value_before_first, Side side)
    : jump_times_(std::move(jump_times)),
      values_(std::move(values)),
      value_before_first_(value_before_first),
      side_(side) {
  if (jump_times_.size() != values_.size())
    throw ConfigError("StepFunction: one value per jump time is required");
  for (std::size_t i = 1; i < jump_times_.size(); ++i)
    if (!(jump_times_[i] > jump_times_[i - 1]))
      throw ConfigError("StepFunction: jump times must be strictly increasing");
}

double StepFunction::operator()(double t) const {
  // Number of jumps already taken at t.
  const auto it = side_ == Side::right
                      ? std::upper_bound(jump_times_.begin(), jump_times_.end(), t)
                      : std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return value_before_first_;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return value_before_first_;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

}  // namespace pdmp
