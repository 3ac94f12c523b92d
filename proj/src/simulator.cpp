#include "pdmp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

std::vector<double> Trajectory::jump_times() const {
  std::vector<double> times;
  times.reserve(records.size());
  double t = 0.0;
  for (const auto& r : records) {
    t += r.s;
    times.push_back(t);
  }
  return times;
}

namespace {

// Lewis-Shedler thinning against a blockwise-constant majorant of the
// envelope, truncated at t*.
Sojourn thinning(const ModelSpec& model, const State& xi, double t_star, Rng& rng,
                 const SimulationOptions& opts) {
  double block_start = 0.0;
  for (;;) {
    const double block_end = std::min(block_start + opts.thinning_block, t_star);
    const double bound = std::max(model.hazard_envelope(block_start), model.hazard_envelope(block_end));
    double t = block_start;
    bool crossed = bound <= 0.0;
    while (!crossed) {
      t += rng.exponential(bound);
      if (t >= block_end) {
        crossed = true;
        break;
      }
      const double rate = model.hazard(model.flow(xi, t));
      if (rate > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "hazard " << rate << " exceeds the envelope bound " << bound << " at time " << t;
        throw ConfigError(msg.str());
      }
      if (rng.uniform() * bound < rate) return {t, false};
    }
    if (block_end >= t_star) return {t_star, true};
    block_start = block_end;
  }
}

// Solves Lambda(S) = E for E ~ Exp(1) by bisection on the cumulative hazard.
Sojourn inversion(const ModelSpec& model, const State& xi, double t_star, Rng& rng,
                  const SimulationOptions& opts) {
  const double target = rng.exponential(1.0);
  auto segment = [&](double a, double b) {
    return integrate([&](double s) { return model.hazard(model.flow(xi, s)); }, a, b,
                     opts.quadrature)
        .value;
  };

  double lo = 0.0, lambda_lo = 0.0;
  double hi;
  if (std::isfinite(t_star)) {
    if (segment(0.0, t_star) <= target) return {t_star, true};
    hi = t_star;
  } else {
    hi = 1.0;
    for (;;) {
      const double lambda_hi = lambda_lo + segment(lo, hi);
      if (lambda_hi > target) break;
      lo = hi;
      lambda_lo = lambda_hi;
      hi *= 2.0;
      if (hi > opts.inversion_max_time)
        throw ConfigError("cumulative hazard of '" + model.name +
                          "' stays bounded and the exit time is infinite; no envelope to fall back on");
    }
  }

  while (hi - lo > opts.inversion_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double lambda_mid = lambda_lo + segment(lo, mid);
    if (lambda_mid < target) {
      lo = mid;
      lambda_lo = lambda_mid;
    } else {
      hi = mid;
    }
  }
  return {hi, false};
}

// A spontaneous jump is never reported within the forced-jump tolerance of t*.
Sojourn keep_off_boundary(Sojourn s, double t_star) {
  if (!s.forced && s.time > t_star - 2.0 * kTimeTolerance) s.time = t_star - 2.0 * kTimeTolerance;
  return s;
}

}  // namespace

Sojourn sample_sojourn(const ModelSpec& model, const State& xi, Rng& rng,
                       const SimulationOptions& opts) {
  require_in_domain(model, xi);
  const double t_star = model.exit_time(xi);
  if (!(t_star > 0.0)) throw DomainError("exit time must be positive inside the domain");

  SojournMethod method = opts.sojourn_method;
  if (method == SojournMethod::automatic)
    method = model.has_envelope() ? SojournMethod::thinning : SojournMethod::inversion;
  if (method == SojournMethod::thinning) {
    if (!model.has_envelope())
      throw ConfigError("thinning requested but model '" + model.name + "' has no hazard envelope");
    if (!(opts.thinning_block > 0.0)) throw ConfigError("thinning block must be positive");
    return keep_off_boundary(thinning(model, xi, t_star, rng, opts), t_star);
  }
  return keep_off_boundary(inversion(model, xi, t_star, rng, opts), t_star);
}

State sample_postjump(const ModelSpec& model, const State& xi, double s, Rng& rng,
                      const SimulationOptions& opts) {
  require_in_domain(model, xi);
  const double t_star = model.exit_time(xi);
  if (!(s > 0.0) || s > t_star + kTimeTolerance)
    throw HorizonError("post-jump sampling needs 0 < s <= t*(xi)");
  for (std::size_t attempt = 0; attempt < opts.max_rejection_attempts; ++attempt) {
    State y = model.kernel_sampler(xi, s, rng);
    if (y.size() == model.state_dim && model.contains(y)) return y;
  }
  throw SamplingError("kernel sampler of '" + model.name + "' produced no state inside the domain");
}

Trajectory simulate_chain(const ModelSpec& model, const State& x0, std::size_t n_jumps, Rng& rng,
                          const SimulationOptions& opts) {
  validate(model);
  require_in_domain(model, x0);
  if (n_jumps < 1) throw ConfigError("simulate_chain: n_jumps must be at least 1");

  Trajectory traj;
  traj.seed = rng.seed();
  traj.records.reserve(n_jumps + 1);
  traj.records.push_back({x0, 0.0, false});
  for (std::size_t i = 0; i < n_jumps; ++i) {
    const State& z = traj.records.back().z;
    const Sojourn sojourn = sample_sojourn(model, z, rng, opts);
    State next = sample_postjump(model, z, sojourn.time, rng, opts);
    traj.records.push_back({std::move(next), sojourn.time, sojourn.forced});
  }
  return traj;
}

Trajectory simulate_chain(const ModelSpec& model, const State& x0, std::size_t n_jumps,
                          std::uint64_t seed, const SimulationOptions& opts) {
  Rng rng(seed);
  return simulate_chain(model, x0, n_jumps, rng, opts);
}

void check_trajectory(const ModelSpec& model, const Trajectory& traj) {
  if (traj.records.empty()) throw DomainError("trajectory has no records");
  auto where = [](std::size_t i) { return "record " + std::to_string(i) + ": "; };
  const auto& first = traj.records.front();
  if (first.s != 0.0 || first.forced) throw DomainError(where(0) + "must have s = 0 and forced = 0");
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    if (r.z.size() != model.state_dim || !model.contains(r.z))
      throw DomainError(where(i) + "state outside the domain");
    if (i == 0) continue;
    const double t_star = model.exit_time(traj.records[i - 1].z);
    if (!(r.s > 0.0)) throw HorizonError(where(i) + "sojourn must be positive");
    if (r.s > t_star + kTimeTolerance) throw HorizonError(where(i) + "sojourn exceeds the exit time");
    const bool at_boundary = std::abs(r.s - t_star) <= kTimeTolerance;
    if (r.forced != at_boundary)
      throw HorizonError(where(i) + "forced flag disagrees with the exit time");
  }
}

}  // namespace pdmp
