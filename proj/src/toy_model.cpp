#include "pdmp/toy_model.hpp"

#include "pdmp/errors.hpp"

namespace pdmp {

ModelSpec build_drift_model(double rate) {
  if (!(rate >= 0.0)) throw ConfigError("drift model rate must be nonnegative");
  ModelSpec m;
  m.name = rate == 0.0 ? "drift-free" : "drift";
  m.state_dim = 1;
  m.flow = [](const State& xi, double t) { return State{xi[0] + t}; };
  m.hazard = [rate](const State&) { return rate; };
  m.hazard_envelope = [rate](double) { return rate; };
  m.kernel_density = [](const State&, double, const State& y) {
    return (y[0] > 0.0 && y[0] < 1.0) ? 1.0 : 0.0;
  };
  m.kernel_sampler = [](const State&, double, Rng& rng) { return State{rng.uniform_open()}; };
  m.exit_time = [](const State& xi) { return 1.0 - xi[0]; };
  m.contains = [](const State& xi) { return xi.size() == 1 && xi[0] > 0.0 && xi[0] < 1.0; };
  m.density_lower_bound = 1.0;
  m.exit_time_sup = 1.0;
  return m;
}

}  // namespace pdmp
