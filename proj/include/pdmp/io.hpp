#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdmp/estimators.hpp"
#include "pdmp/simulator.hpp"

namespace pdmp {

// Trajectory file: an optional "# seed=<u64>" line, then the header
// "i,z1,...,zd,s,forced" and one comma-separated row per record. Numbers are
// written with 17 significant digits, so reading back is exact.
void write_trajectory(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory(const std::string& path);

// Estimate file: "# key=value" provenance lines, then the header
// "s,f_hat" or "s,f_hat,f_true" and one row per grid point.
void write_estimate(const DensityEstimate& estimate, const std::string& path,
                    std::span<const double> truth = {});

struct EstimateTable {
  std::vector<double> s;
  std::vector<double> f_hat;
  std::vector<double> f_true;  // empty when the file has no truth column
  std::map<std::string, std::string> meta;
};
EstimateTable read_estimate(const std::string& path);

// Whitespace-separated "s f_hat [f_true]" rows for external plotters.
void write_plot_data(const DensityEstimate& estimate, const std::string& path,
                     std::span<const double> truth = {});

// Flat "key = value" file; '#' starts a comment. Duplicate keys and lines
// without '=' are parse errors.
std::map<std::string, std::string> read_config(const std::string& path);

// Shortest exact decimal form used by the writers (17 significant digits).
std::string format_double(double v);

}  // namespace pdmp
