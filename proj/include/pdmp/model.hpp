#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "pdmp/quadrature.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/state.hpp"

namespace pdmp {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// Absolute tolerance on times compared against an exit time.
inline constexpr double kTimeTolerance = 1e-12;

// Local characteristics of a piecewise-deterministic Markov process together
// with the optional bounds used for sampling and for the lower bound on H.
//
// Every callable must be pure; a ModelSpec is shared read-only between
// simulations and estimators.
struct ModelSpec {
  std::string name;
  std::size_t state_dim = 0;

  // Deterministic flow Phi(xi, t).
  std::function<State(const State&, double)> flow;
  // Jump rate lambda on the closure of E.
  std::function<double(const State&)> hazard;
  // Density Q~(xi, s, y) of Q(Phi(xi, s), .) with respect to the reference
  // measure of the model.
  std::function<double(const State&, double, const State&)> kernel_density;
  // Draw from Q(Phi(xi, s), .).
  std::function<State(const State&, double, Rng&)> kernel_sampler;
  // t*(xi) in (0, +inf]; kInfiniteTime when the flow never leaves E.
  std::function<double(const State&)> exit_time;
  // Membership in the open set E.
  std::function<bool(const State&)> contains;

  // Optional bound M(t) >= lambda(Phi(xi, t)) for every xi. Used as the
  // thinning envelope; it must be monotone on each thinning block.
  std::function<double(double)> hazard_envelope;
  // Optional constant m with Q~ >= m.
  std::optional<double> density_lower_bound;
  // Optional bound on t* over E.
  std::optional<double> exit_time_sup;

  bool has_envelope() const { return static_cast<bool>(hazard_envelope); }
};

// Throws ConfigError if a mandatory callable is missing or state_dim is 0.
void validate(const ModelSpec& model);

// DomainError unless xi has state_dim coordinates and lies in E.
void require_in_domain(const ModelSpec& model, const State& xi);

// lambda(Phi(xi, t)).
double hazard_along_flow(const ModelSpec& model, const State& xi, double t);

// int_0^t lambda(Phi(xi, s)) ds by adaptive quadrature.
double cumulative_hazard(const ModelSpec& model, const State& xi, double t,
                         const QuadratureOptions& quad = {});

// G(xi, t) = exp(-cumulative hazard).
double survival_G(const ModelSpec& model, const State& xi, double t,
                  const QuadratureOptions& quad = {});

// f(xi, t) = lambda(Phi(xi, t)) G(xi, t).
double density_f(const ModelSpec& model, const State& xi, double t,
                 const QuadratureOptions& quad = {});

// The same quantities without the domain and horizon checks, for inner loops
// that have already validated their arguments.
namespace unchecked {
double cumulative_hazard(const ModelSpec& model, const State& xi, double t,
                         const QuadratureOptions& quad);
double density_f(const ModelSpec& model, const State& xi, double t,
                 const QuadratureOptions& quad);
}  // namespace unchecked

// Exit time by following the flow: the step grows geometrically until the
// flow leaves E, then the last bracket is bisected down to `tolerance`.
// Returns kInfiniteTime when the flow is still inside E at `max_time`.
double exit_time_by_bisection(const std::function<State(const State&, double)>& flow,
                              const std::function<bool(const State&)>& contains,
                              const State& xi, double initial_step = 1e-2,
                              double max_time = 1e6, double tolerance = kTimeTolerance);

}  // namespace pdmp
