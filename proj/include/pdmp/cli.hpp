#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdmp/bench_model.hpp"
#include "pdmp/model.hpp"

namespace pdmp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parameters of one CLI command. Field names mirror the flags.
struct RunConfig {
  std::string model = "bench";  // bench | bench-corrupt | drift | drift-free
  std::size_t n_jumps = 50000;
  std::uint64_t seed = 1;
  double sigma2 = 1e-4;
  double epsilon = 0.1;
  double rate = 1.0;  // drift model jump rate
  std::optional<std::vector<double>> x0;
  double alpha = 1.0 / 3.0;
  double horizon = 0.8;
  double r1 = 0.05;
  double r2 = 0.75;
  std::size_t grid = 128;
  std::string out;
  std::string traj;
  std::string plot;
  bool truth = false;
  // oracle command
  std::size_t oracle_states = 20;
  std::size_t oracle_triples = 100;
  std::size_t oracle_survival_checks = 3;

  void validate() const;
};

ModelSpec model_from_config(const RunConfig& cfg);
BenchParams bench_params_from_config(const RunConfig& cfg);
// Explicit x0, or the model's default start state.
State start_state(const RunConfig& cfg);

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line: `pdmp <simulate|estimate|oracle> [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdmp
