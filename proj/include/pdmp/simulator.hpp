#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/state.hpp"

namespace pdmp {

struct TrajectoryRecord {
  State z;
  double s = 0.0;
  bool forced = false;

  bool operator==(const TrajectoryRecord&) const = default;
};

// Embedded chain (Z_i, S_i). Record 0 is (Z_0, 0, false); record i >= 1 holds
// the post-jump location Z_i, the sojourn S_i = T_i - T_{i-1} and whether the
// jump was forced by the boundary.
struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::uint64_t seed = 0;

  // Number of transitions n (records.size() - 1).
  std::size_t transitions() const { return records.empty() ? 0 : records.size() - 1; }
  // Jump times T_i as prefix sums of the sojourns.
  std::vector<double> jump_times() const;

  bool operator==(const Trajectory&) const = default;
};

enum class SojournMethod {
  automatic,  // thinning when the model has an envelope, inversion otherwise
  thinning,
  inversion,
};

struct SimulationOptions {
  SojournMethod sojourn_method = SojournMethod::automatic;
  // Width of the blocks over which the envelope is held constant.
  double thinning_block = 1.0;
  double inversion_tol = 1e-10;
  // Largest horizon searched by inversion when t* is infinite.
  double inversion_max_time = 1e6;
  std::size_t max_rejection_attempts = 1'000'000;
  QuadratureOptions quadrature{};
};

struct Sojourn {
  double time = 0.0;
  bool forced = false;
};

// S in (0, t*(xi)] with P(S > t) = G(xi, t) 1{t < t*(xi)}.
Sojourn sample_sojourn(const ModelSpec& model, const State& xi, Rng& rng,
                       const SimulationOptions& opts = {});

// Draw from Q(Phi(xi, s), .); throws SamplingError if the model's sampler
// returns a state outside E max_rejection_attempts times in a row.
State sample_postjump(const ModelSpec& model, const State& xi, double s, Rng& rng,
                      const SimulationOptions& opts = {});

// n_jumps transitions of the embedded chain started at x0.
Trajectory simulate_chain(const ModelSpec& model, const State& x0, std::size_t n_jumps, Rng& rng,
                          const SimulationOptions& opts = {});

// Same, on stream 0 of a fresh generator seeded with `seed`.
Trajectory simulate_chain(const ModelSpec& model, const State& x0, std::size_t n_jumps,
                          std::uint64_t seed, const SimulationOptions& opts = {});

// Throws DomainError / HorizonError naming the first record that breaks a
// trajectory invariant.
void check_trajectory(const ModelSpec& model, const Trajectory& traj);

}  // namespace pdmp
