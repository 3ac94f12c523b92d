#pragma once

#include <cstddef>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace pdmp {

// Coordinates of a point of the state space. Inline storage covers the
// low-dimensional models this library is used with.
using State = boost::container::small_vector<double, 4>;

// Axis-aligned box [lower, upper] in state coordinates.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  bool contains(const State& x) const {
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    return true;
  }
};

}  // namespace pdmp
