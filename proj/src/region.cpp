#include "pdmp/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/random/sobol.hpp>

#include "pdmp/errors.hpp"

namespace pdmp {

std::optional<std::size_t> PartitionSpec::locate(const State& x) const {
  std::optional<std::size_t> found;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!cells[k].contains(x)) continue;
    if (found)
      throw DomainError("cells '" + cells[*found].label + "' and '" + cells[k].label +
                        "' overlap");
    found = k;
  }
  return found;
}

RegionSpec box_region(std::string label, Box bounds, std::vector<std::size_t> constrained_axes,
                      bool open) {
  if (bounds.lower.size() != bounds.upper.size())
    throw ConfigError("box_region: lower and upper bounds differ in size");
  double diam2 = 0.0;
  for (std::size_t axis : constrained_axes) {
    if (axis >= bounds.dim()) throw ConfigError("box_region: axis out of range");
    if (!(bounds.upper[axis] > bounds.lower[axis])) throw ConfigError("box_region: empty box");
    diam2 += std::pow(bounds.upper[axis] - bounds.lower[axis], 2);
  }
  RegionSpec r;
  r.label = std::move(label);
  r.diameter = std::sqrt(diam2);
  r.membership = [bounds, constrained_axes, open](const State& x) {
    for (std::size_t axis : constrained_axes) {
      const double v = x[axis];
      if (open ? !(v > bounds.lower[axis] && v < bounds.upper[axis])
               : !(v >= bounds.lower[axis] && v <= bounds.upper[axis]))
        return false;
    }
    return true;
  };
  r.bounds = std::move(bounds);
  return r;
}

RegionSpec difference_region(std::string label, const RegionSpec& outer, const RegionSpec& inner) {
  RegionSpec r;
  r.label = std::move(label);
  r.diameter = outer.diameter;
  r.bounds = outer.bounds;
  r.membership = [o = outer.membership, i = inner.membership](const State& x) {
    return o(x) && !i(x);
  };
  return r;
}

namespace {

// Cell [lo, hi) on every gridded axis, closed on the sides that touch K's
// upper bound.
RegionSpec grid_cell(const RegionSpec& K, const std::vector<std::size_t>& axes,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     const std::vector<bool>& closed_top, std::string label) {
  double diam2 = 0.0;
  for (std::size_t j = 0; j < axes.size(); ++j) diam2 += std::pow(hi[j] - lo[j], 2);
  Box box = *K.bounds;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    box.lower[axes[j]] = lo[j];
    box.upper[axes[j]] = hi[j];
  }
  RegionSpec cell;
  cell.label = std::move(label);
  cell.diameter = std::sqrt(diam2);
  cell.bounds = std::move(box);
  cell.membership = [k = K.membership, axes, lo, hi, closed_top](const State& x) {
    for (std::size_t j = 0; j < axes.size(); ++j) {
      const double v = x[axes[j]];
      if (v < lo[j]) return false;
      if (closed_top[j] ? v > hi[j] : v >= hi[j]) return false;
    }
    return k(x);
  };
  return cell;
}

bool probe_hits(const RegionSpec& K, const std::vector<std::size_t>& axes,
                const std::vector<double>& lo, const std::vector<double>& hi) {
  constexpr std::size_t kPerAxis = 5;
  const Box& b = *K.bounds;
  State x(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) x[i] = 0.5 * (b.lower[i] + b.upper[i]);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    for (std::size_t j = 0; j < axes.size(); ++j) {
      const double frac = static_cast<double>(idx[j]) / static_cast<double>(kPerAxis - 1);
      x[axes[j]] = lo[j] + frac * (hi[j] - lo[j]);
    }
    if (K.contains(x)) return true;
    std::size_t j = 0;
    while (j < axes.size() && ++idx[j] == kPerAxis) idx[j++] = 0;
    if (j == axes.size()) return false;
  }
}

}  // namespace

PartitionSpec build_partition(const RegionSpec& K, double resolution, std::vector<std::size_t> axes) {
  if (!K.bounds) throw ConfigError("build_partition: region '" + K.label + "' has no bounds");
  if (!(resolution > 0.0)) throw ConfigError("build_partition: resolution must be positive");
  const Box& b = *K.bounds;
  if (axes.empty()) {
    axes.resize(b.dim());
    std::iota(axes.begin(), axes.end(), std::size_t{0});
  }

  std::vector<std::size_t> counts;
  for (std::size_t axis : axes) {
    if (axis >= b.dim()) throw ConfigError("build_partition: axis out of range");
    const double extent = b.upper[axis] - b.lower[axis];
    if (!(extent > 0.0) || !std::isfinite(extent))
      throw ConfigError("build_partition: region must be bounded with nonempty extent");
    // Guard against 1.0 / 0.5 style ratios picking up an extra sliver cell.
    counts.push_back(std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(extent / resolution - 1e-9))));
  }

  PartitionSpec partition;
  std::vector<std::size_t> idx(axes.size(), 0);
  std::vector<double> lo(axes.size()), hi(axes.size());
  std::vector<bool> closed_top(axes.size());
  for (;;) {
    std::string label = K.label + "[";
    for (std::size_t j = 0; j < axes.size(); ++j) {
      const std::size_t axis = axes[j];
      lo[j] = b.lower[axis] + resolution * static_cast<double>(idx[j]);
      closed_top[j] = idx[j] + 1 == counts[j];
      hi[j] = closed_top[j] ? b.upper[axis] : b.lower[axis] + resolution * static_cast<double>(idx[j] + 1);
      label += (j ? "," : "") + std::to_string(idx[j]);
    }
    label += "]";
    if (probe_hits(K, axes, lo, hi))
      partition.cells.push_back(grid_cell(K, axes, lo, hi, closed_top, std::move(label)));

    std::size_t j = 0;
    while (j < axes.size() && ++idx[j] == counts[j]) idx[j++] = 0;
    if (j == axes.size()) break;
  }
  if (partition.cells.empty()) throw ConfigError("build_partition: no cell intersects '" + K.label + "'");

  const auto largest = std::max_element(
      partition.cells.begin(), partition.cells.end(),
      [](const RegionSpec& l, const RegionSpec& r) { return l.diameter < r.diameter; });
  std::rotate(partition.cells.begin(), largest, largest + 1);
  return partition;
}

double region_exit_time(const ModelSpec& model, const RegionSpec& A, const ExitTimeSearch& search) {
  if (A.exit_time_inf) return *A.exit_time_inf;
  if (!A.bounds) throw ConfigError("region '" + A.label + "' has neither an exit time nor bounds");
  const Box& b = *A.bounds;
  if (b.dim() != model.state_dim) throw ConfigError("region bounds do not match the model dimension");

  boost::random::sobol qrng(b.dim());
  const double scale = 1.0 / (static_cast<double>(qrng.max()) + 1.0);
  double inf = std::numeric_limits<double>::infinity();
  std::size_t hits = 0;
  State x(b.dim());
  for (std::size_t n = 0; n < search.points; ++n) {
    for (std::size_t i = 0; i < b.dim(); ++i)
      x[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * (static_cast<double>(qrng()) * scale);
    if (!A.contains(x) || !model.contains(x)) continue;
    ++hits;
    inf = std::min(inf, model.exit_time(x));
  }
  if (hits == 0) throw ConfigError("no sample point fell inside region '" + A.label + "'");
  return inf * (1.0 - search.safety_margin);
}

RegionSpec resolve_exit_time(const ModelSpec& model, RegionSpec A, const ExitTimeSearch& search) {
  A.exit_time_inf = region_exit_time(model, A, search);
  return A;
}

}  // namespace pdmp
