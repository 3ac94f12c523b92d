#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdmp/region.hpp"
#include "pdmp/simulator.hpp"
#include "pdmp/step_function.hpp"

namespace pdmp {

// Continuous even kernel supported on [-1, 1] with unit mass.
struct SmoothingKernel {
  std::string name;
  std::function<double(double)> weight;

  double operator()(double u) const { return weight(u); }
};

// K(u) = 0.75 (1 - u^2) on [-1, 1].
SmoothingKernel epanechnikov();

// ConfigError unless K(+-1) = 0, K vanishes outside [-1, 1], K is even at a
// few probe points and integrates to 1 within 1e-10.
void validate_kernel(const SmoothingKernel& kernel);

enum class HorizonMode {
  per_cell,  // each cell of K is checked against its own t*(A_l)
  uniform,   // every cell must satisfy horizon_t < min_l t*(A_l)
};

struct EstimatorConfig {
  SmoothingKernel kernel = epanechnikov();
  double alpha = 1.0 / 3.0;  // bandwidth exponent
  double horizon_t = 0.8;    // events with S > horizon_t are not smoothed
  double r1 = 0.05;          // estimation window [r1, r2]
  double r2 = 0.75;
  std::size_t grid_points = 128;
  HorizonMode horizon_mode = HorizonMode::per_cell;

  // Uniform grid over [r1, r2]; a single point grid is {r1}.
  std::vector<double> grid() const;
  // ConfigError on an invalid kernel, alpha <= 0, or a window not strictly
  // inside (0, horizon_t).
  void validate() const;
};

struct CellSummary {
  std::string label;
  std::size_t matched = 0;            // h_n(A, B_k)
  std::optional<double> bandwidth;    // unset for cells without matched transitions
};

struct EstimateMeta {
  std::size_t transitions = 0;
  std::size_t visits = 0;
  double horizon_t = 0.0;
  std::string region_label;
  std::uint64_t seed = 0;
  std::vector<CellSummary> cells;
};

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> values;
  EstimateMeta meta;
};

// Number of i in [0, n) with Z_i in A.
std::size_t visits(const Trajectory& traj, const RegionSpec& A);

// Number of i in [0, n) with Z_i in A and Z_{i+1} in B.
std::size_t matched_transitions(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B);

// Sojourns S_{i+1} of the matched transitions, in trajectory order.
std::vector<double> matched_sojourns(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B);

// N_n(A, B, t) = #{matched i : S_{i+1} <= t}, right-continuous.
StepFunction counting_N(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B);

// Y_n(A, B, t) = #{matched i : S_{i+1} >= t}, left-continuous.
StepFunction at_risk_Y(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B);

// Generalized inverse: 0 for y = 0, 1/y otherwise.
double y_plus(std::size_t y);

// Nelson-Aalen type estimator int_0^t Y^+ dN on [0, horizon_t]. Matched
// events after horizon_t are left out. Requires A.exit_time_inf and
// horizon_t < t*(A).
StepFunction nelson_aalen_L(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                            double horizon_t);

// Kernel-smoothed increments of the Nelson-Aalen estimator,
//   (1/b) sum K((s - S)/b) Y^+(S) 1{S <= horizon_t},
// evaluated at `points` (defaults to config.grid()).
std::vector<double> smoothed_l(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                               const EstimatorConfig& config, double bandwidth);
std::vector<double> smoothed_l(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                               const EstimatorConfig& config, double bandwidth,
                               std::span<const double> points);

// Plug-in variance (1/b^2) sum K((s - S)/b)^2 (Y^+(S))^2 of smoothed_l.
std::vector<double> smoothed_l_variance(const Trajectory& traj, const RegionSpec& A,
                                        const RegionSpec& B, const EstimatorConfig& config,
                                        double bandwidth, std::span<const double> points);

// p_n(A, B, t): fraction of visits to A followed by a jump into B after a
// sojourn longer than t. UndefinedEstimatorError when A is never visited.
double empirical_survivor_p(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                            double t);

// h^(-alpha) with h the matched-transition count (all sojourns, whatever the
// horizon). UndefinedEstimatorError when h = 0.
double bandwidth_rule(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B,
                      double alpha);
double bandwidth_rule(std::size_t matched, double alpha);

// f_n(A, s) = sum_k l_k(s) p_k(s) over the cells of `partition`, with one
// bandwidth per cell. Cells without matched transitions contribute 0. The
// per-point sum is taken over the terms sorted by value, so the result does
// not depend on the order of the cells.
DensityEstimate estimate_density_f(const Trajectory& traj, const RegionSpec& A,
                                   const PartitionSpec& partition, const EstimatorConfig& config);

struct CellEstimate {
  std::string label;
  std::optional<DensityEstimate> estimate;
  std::string error;  // why `estimate` is empty
};

// estimate_density_f for every cell A_l of a partition of K. Every cell must
// carry its exit time. In per-cell mode a failing cell is reported and the
// others proceed; in uniform mode horizon_t is checked against min_l t*(A_l)
// up front and any failure is thrown.
std::vector<CellEstimate> estimate_density_map(const Trajectory& traj, const PartitionSpec& cells_of_K,
                                               const PartitionSpec& partition,
                                               const EstimatorConfig& config);

}  // namespace pdmp
