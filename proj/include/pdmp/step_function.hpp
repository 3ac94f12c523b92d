#pragma once

#include <vector>

namespace pdmp {

// Piecewise-constant function with jumps at strictly increasing times.
//
// With Side::right (the default) the function is right-continuous: at a jump
// time it already takes the new value. With Side::left it is left-continuous:
// the new value applies strictly after the jump time. The at-risk process
// #{S >= t} is the left-continuous case.
class StepFunction {
 public:
  enum class Side { right, left };

  StepFunction() = default;
  StepFunction(std::vector<double> jump_times, std::vector<double> values,
               double value_before_first, Side side = Side::right);

  double operator()(double t) const;
  // Limit from the left, f(t-).
  double left_limit(double t) const;

  const std::vector<double>& jump_times() const { return jump_times_; }
  const std::vector<double>& values() const { return values_; }
  double value_before_first() const { return value_before_first_; }
  Side side() const { return side_; }

 private:
  std::vector<double> jump_times_;
  std::vector<double> values_;
  double value_before_first_ = 0.0;
  Side side_ = Side::right;
};

}  // namespace pdmp
