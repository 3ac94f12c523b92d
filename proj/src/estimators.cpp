#include "pdmp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"
#include "pdmp/quadrature.hpp"

namespace pdmp {

SmoothingKernel epanechnikov() {
  return {"epanechnikov", [](double u) { return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }};
}

void validate_kernel(const SmoothingKernel& kernel) {
  if (!kernel.weight) throw ConfigError("kernel has no weight function");
  const std::string who = "kernel '" + kernel.name + "': ";
  if (std::abs(kernel(1.0)) > 1e-12 || std::abs(kernel(-1.0)) > 1e-12)
    throw ConfigError(who + "must vanish at +-1");
  for (double u : {1.0 + 1e-9, 1.5, 3.0})
    if (kernel(u) != 0.0 || kernel(-u) != 0.0) throw ConfigError(who + "support must be [-1, 1]");
  for (double u : {0.1, 0.37, 0.5, 0.81})
    if (std::abs(kernel(u) - kernel(-u)) > 1e-12) throw ConfigError(who + "must be even");
  const double mass = integrate(kernel.weight, -1.0, 1.0, {.abs_tol = 1e-13}).value;
  if (std::abs(mass - 1.0) > 1e-10) throw ConfigError(who + "must integrate to 1");
}

std::vector<double> EstimatorConfig::grid() const {
  std::vector<double> g(grid_points);
  if (grid_points == 1) {
    g[0] = r1;
    return g;
  }
  const double step = (r2 - r1) / static_cast<double>(grid_points - 1);
  for (std::size_t j = 0; j < grid_points; ++j) g[j] = r1 + step * static_cast<double>(j);
  g.back() = r2;
  return g;
}

void EstimatorConfig::validate() const {
  validate_kernel(kernel);
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (grid_points == 0) throw ConfigError("grid needs at least one point");
  if (!(0.0 < r1 && r1 < r2 && r2 < horizon_t))
    throw ConfigError("window must satisfy 0 < r1 < r2 < horizon_t");
}

namespace {

// Membership of every record, computed once.
std::vector<char> member_mask(const Trajectory& traj, const RegionSpec& R) {
  std::vector<char> mask(traj.records.size());
  for (std::size_t i = 0; i < traj.records.size(); ++i) mask[i] = R.contains(traj.records[i].z);
  return mask;
}

std::vector<double> matched_from_masks(const Trajectory& traj, const std::vector<char>& in_a,
                                       const std::vector<char>& in_b) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i)
    if (in_a[i] && in_b[i + 1]) out.push_back(traj.records[i + 1].s);
  return out;
}

std::size_t visits_from_mask(const std::vector<char>& in_a) {
  if (in_a.empty()) return 0;
  return static_cast<std::size_t>(std::count(in_a.begin(), in_a.end() - 1, char{1}));
}

void require_transition(const Trajectory& traj) {
  if (traj.transitions() < 1) throw ConfigError("trajectory has no transition");
}

void require_horizon(const RegionSpec& A, double horizon_t) {
  if (!A.exit_time_inf)
    throw ConfigError("exit time of region '" + A.label + "' is unknown; resolve it first");
  if (!(horizon_t > 0.0) || !(horizon_t < *A.exit_time_inf)) {
    std::ostringstream msg;
    msg << "horizon " << horizon_t << " must lie in (0, t*(" << A.label << ") = " << *A.exit_time_inf
        << ")";
    throw ConfigError(msg.str());
  }
}

// Matched events sorted, each with its Nelson-Aalen increment Y^+(S).
struct Events {
  std::vector<double> times;
  std::vector<double> increments;
};

Events nelson_aalen_events(std::vector<double> sojourns) {
  std::sort(sojourns.begin(), sojourns.end());
  Events e;
  e.times = std::move(sojourns);
  e.increments.resize(e.times.size());
  const std::size_t total = e.times.size();
  for (std::size_t j = 0; j < total; ++j) {
    // Y(S_j) = #{S >= S_j}; ties share the count of the first of the run.
    const auto first = std::lower_bound(e.times.begin(), e.times.end(), e.times[j]);
    e.increments[j] = y_plus(total - static_cast<std::size_t>(first - e.times.begin()));
  }
  return e;
}

// sum over events with S <= horizon of K((s - S)/b)^power * (Y^+)^power / b^power.
std::vector<double> kernel_sum(const Events& e, const SmoothingKernel& kernel, double horizon,
                               double bandwidth, std::span<const double> points, int power) {
  std::vector<double> out(points.size(), 0.0);
  const auto end = std::upper_bound(e.times.begin(), e.times.end(), horizon);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double s = points[j];
    auto it = std::lower_bound(e.times.begin(), end, s - bandwidth);
    double acc = 0.0;
    for (; it != end && *it <= s + bandwidth; ++it) {
      const std::size_t k = static_cast<std::size_t>(it - e.times.begin());
      const double term = kernel((s - *it) / bandwidth) * e.increments[k];
      acc += power == 1 ? term : term * term;
    }
    out[j] = power == 1 ? acc / bandwidth : acc / (bandwidth * bandwidth);
  }
  return out;
}

std::vector<double> checked_points(const EstimatorConfig& config, std::span<const double> points,
                                   double bandwidth) {
  if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  config.validate();
  return {points.begin(), points.end()};
}

double survivor_from_masks(const Trajectory& traj, const std::vector<char>& in_a,
                           const std::vector<char>& in_b, std::size_t n_visits, double t) {
  std::size_t survivors = 0;
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i)
    if (in_a[i] && in_b[i + 1] && traj.records[i + 1].s > t) ++survivors;
  return static_cast<double>(survivors) / static_cast<double>(n_visits);
}

}  // namespace

std::size_t visits(const Trajectory& traj, const RegionSpec& A) {
  return visits_from_mask(member_mask(traj, A));
}

std::size_t matched_transitions(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B) {
  return matched_sojourns(traj, A, B).size();
}

std::vector<double> matched_sojourns(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B) {
  return matched_from_masks(traj, member_mask(traj, A), member_mask(traj, B));
}

StepFunction counting_N(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B) {
  require_transition(traj);
  std::vector<double> s = matched_sojourns(traj, A, B);
  std::sort(s.begin(), s.end());
  std::vector<double> times, values;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (times.empty() || s[j] != times.back()) {
      times.push_back(s[j]);
      values.push_back(0.0);
    }
    values.back() = static_cast<double>(j + 1);
  }
  return {std::move(times), std::move(values), 0.0, StepFunction::Side::right};
}

StepFunction at_risk_Y(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B) {
  require_transition(traj);
  std::vector<double> s = matched_sojourns(traj, A, B);
  std::sort(s.begin(), s.end());
  const double total = static_cast<double>(s.size());
  std::vector<double> times, values;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (times.empty() || s[j] != times.back()) {
      times.push_back(s[j]);
      values.push_back(0.0);
    }
    // After the last of the tied events at this time, j + 1 sojourns are < t.
    values.back() = total - static_cast<double>(j + 1);
  }
  return {std::move(times), std::move(values), total, StepFunction::Side::left};
}

double y_plus(std::size_t y) { return y == 0 ? 0.0 : 1.0 / static_cast<double>(y); }

StepFunction nelson_aalen_L(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                            double horizon_t) {
  require_transition(traj);
  require_horizon(A, horizon_t);
  const Events e = nelson_aalen_events(matched_sojourns(traj, A, B));
  std::vector<double> times, values;
  double acc = 0.0;
  for (std::size_t j = 0; j < e.times.size() && e.times[j] <= horizon_t; ++j) {
    acc += e.increments[j];
    if (times.empty() || e.times[j] != times.back()) {
      times.push_back(e.times[j]);
      values.push_back(acc);
    } else {
      values.back() = acc;
    }
  }
  return {std::move(times), std::move(values), 0.0, StepFunction::Side::right};
}

std::vector<double> smoothed_l(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                               const EstimatorConfig& config, double bandwidth) {
  const std::vector<double> g = config.grid();
  return smoothed_l(traj, A, B, config, bandwidth, g);
}

std::vector<double> smoothed_l(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                               const EstimatorConfig& config, double bandwidth,
                               std::span<const double> points) {
  const auto pts = checked_points(config, points, bandwidth);
  require_transition(traj);
  const Events e = nelson_aalen_events(matched_sojourns(traj, A, B));
  return kernel_sum(e, config.kernel, config.horizon_t, bandwidth, pts, 1);
}

std::vector<double> smoothed_l_variance(const Trajectory& traj, const RegionSpec& A,
                                        const RegionSpec& B, const EstimatorConfig& config,
                                        double bandwidth, std::span<const double> points) {
  const auto pts = checked_points(config, points, bandwidth);
  require_transition(traj);
  const Events e = nelson_aalen_events(matched_sojourns(traj, A, B));
  return kernel_sum(e, config.kernel, config.horizon_t, bandwidth, pts, 2);
}

double empirical_survivor_p(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                            double t) {
  require_transition(traj);
  const auto in_a = member_mask(traj, A);
  const std::size_t n_visits = visits_from_mask(in_a);
  if (n_visits == 0)
    throw UndefinedEstimatorError("region '" + A.label + "' is never visited; p_n is undefined");
  return survivor_from_masks(traj, in_a, member_mask(traj, B), n_visits, t);
}

double bandwidth_rule(std::size_t matched, double alpha) {
  if (matched == 0)
    throw UndefinedEstimatorError("no matched transition; the bandwidth rule is undefined");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  return std::pow(static_cast<double>(matched), -alpha);
}

double bandwidth_rule(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                      double alpha) {
  return bandwidth_rule(matched_transitions(traj, A, B), alpha);
}

DensityEstimate estimate_density_f(const Trajectory& traj, const RegionSpec& A,
                                   const PartitionSpec& partition, const EstimatorConfig& config) {
  config.validate();
  require_transition(traj);
  require_horizon(A, config.horizon_t);
  if (partition.cells.empty()) throw ConfigError("partition has no cells");

  const auto in_a = member_mask(traj, A);
  const std::size_t n_visits = visits_from_mask(in_a);
  if (n_visits == 0)
    throw UndefinedEstimatorError("region '" + A.label + "' is never visited; f_n is undefined");

  DensityEstimate out;
  out.grid = config.grid();
  out.values.assign(out.grid.size(), 0.0);
  out.meta.transitions = traj.transitions();
  out.meta.visits = n_visits;
  out.meta.horizon_t = config.horizon_t;
  out.meta.region_label = A.label;
  out.meta.seed = traj.seed;

  // terms[j][k] = l_k(s_j) * p_k(s_j)
  std::vector<std::vector<double>> terms(out.grid.size());
  for (const RegionSpec& cell : partition.cells) {
    const auto in_b = member_mask(traj, cell);
    std::vector<double> sojourns = matched_from_masks(traj, in_a, in_b);
    CellSummary summary{cell.label, sojourns.size(), std::nullopt};
    if (sojourns.empty()) {
      for (auto& t : terms) t.push_back(0.0);
      out.meta.cells.push_back(std::move(summary));
      continue;
    }
    const double b = bandwidth_rule(sojourns.size(), config.alpha);
    summary.bandwidth = b;
    const Events e = nelson_aalen_events(std::move(sojourns));
    const std::vector<double> l = kernel_sum(e, config.kernel, config.horizon_t, b, out.grid, 1);
    for (std::size_t j = 0; j < out.grid.size(); ++j)
      terms[j].push_back(l[j] * survivor_from_masks(traj, in_a, in_b, n_visits, out.grid[j]));
    out.meta.cells.push_back(std::move(summary));
  }

  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    std::sort(terms[j].begin(), terms[j].end());
    double acc = 0.0;
    for (double t : terms[j]) acc += t;
    out.values[j] = acc;
  }
  return out;
}

std::vector<CellEstimate> estimate_density_map(const Trajectory& traj, const PartitionSpec& cells_of_K,
                                               const PartitionSpec& partition,
                                               const EstimatorConfig& config) {
  config.validate();
  if (config.horizon_mode == HorizonMode::uniform) {
    for (const RegionSpec& A : cells_of_K.cells) require_horizon(A, config.horizon_t);
  }
  std::vector<CellEstimate> out;
  for (const RegionSpec& A : cells_of_K.cells) {
    CellEstimate cell{A.label, std::nullopt, {}};
    if (config.horizon_mode == HorizonMode::uniform) {
      cell.estimate = estimate_density_f(traj, A, partition, config);
    } else {
      try {
        cell.estimate = estimate_density_f(traj, A, partition, config);
      } catch (const ConfigError& e) {
        cell.error = e.what();
      } catch (const UndefinedEstimatorError& e) {
        cell.error = e.what();
      }
    }
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace pdmp
