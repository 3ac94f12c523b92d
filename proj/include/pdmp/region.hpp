#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/state.hpp"

namespace pdmp {

// A measurable set of states. `bounds`, when set, must enclose the set; it is
// needed to partition the region or to search it for its exit time.
// `exit_time_inf` caches t*(A) = inf over A of t*(xi), either supplied
// analytically or filled in by resolve_exit_time().
struct RegionSpec {
  std::function<bool(const State&)> membership;
  double diameter = 0.0;
  std::string label;
  std::optional<Box> bounds;
  std::optional<double> exit_time_inf;

  bool contains(const State& x) const { return membership(x); }
};

// Non-overlapping cells B_1..B_p; cells[0] is the one with largest diameter.
struct PartitionSpec {
  std::vector<RegionSpec> cells;

  // Index of the unique cell containing x, or nullopt if none does. Throws
  // DomainError if two cells claim x.
  std::optional<std::size_t> locate(const State& x) const;
};

// States whose coordinates on `constrained_axes` lie in `bounds` (open or
// closed box). The remaining axes are not tested; their extent in `bounds` is
// only used for sampling. The diameter is measured on the constrained axes.
RegionSpec box_region(std::string label, Box bounds, std::vector<std::size_t> constrained_axes,
                      bool open = true);

// Complement of `inner` within `outer`.
RegionSpec difference_region(std::string label, const RegionSpec& outer, const RegionSpec& inner);

// Axis-aligned grid of side `resolution` over K's bounds, each cell
// intersected with K. Cells are half-open [lo, hi) except on K's upper bound,
// so they are disjoint and cover K. A cell is dropped when none of the points
// of a 5-per-axis probe lattice (corners included) belongs to K. The
// result is reordered so that the largest-diameter cell comes first.
// `axes` selects the coordinates that are gridded (default: all of them).
PartitionSpec build_partition(const RegionSpec& K, double resolution,
                              std::vector<std::size_t> axes = {});

struct ExitTimeSearch {
  std::size_t points = 10'000;
  double safety_margin = 0.01;
};

// t*(A): the analytic value if the region carries one, otherwise the minimum
// of the model's exit time over a Sobol sample of A's bounds, reduced by the
// safety margin.
double region_exit_time(const ModelSpec& model, const RegionSpec& A, const ExitTimeSearch& search = {});

// Copy of A with exit_time_inf filled in.
RegionSpec resolve_exit_time(const ModelSpec& model, RegionSpec A, const ExitTimeSearch& search = {});

}  // namespace pdmp
