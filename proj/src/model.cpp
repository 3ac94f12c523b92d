#include "pdmp/model.hpp"

#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

void validate(const ModelSpec& model) {
  const std::string who = "model '" + model.name + "': ";
  if (model.state_dim == 0) throw ConfigError(who + "state_dim must be positive");
  if (!model.flow) throw ConfigError(who + "flow is missing");
  if (!model.hazard) throw ConfigError(who + "hazard is missing");
  if (!model.kernel_density) throw ConfigError(who + "kernel_density is missing");
  if (!model.kernel_sampler) throw ConfigError(who + "kernel_sampler is missing");
  if (!model.exit_time) throw ConfigError(who + "exit_time is missing");
  if (!model.contains) throw ConfigError(who + "contains is missing");
  if (model.density_lower_bound && *model.density_lower_bound < 0.0)
    throw ConfigError(who + "density_lower_bound must be nonnegative");
}

void require_in_domain(const ModelSpec& model, const State& xi) {
  if (xi.size() != model.state_dim) {
    std::ostringstream msg;
    msg << "state has " << xi.size() << " coordinates, model '" << model.name << "' expects "
        << model.state_dim;
    throw DomainError(msg.str());
  }
  for (double c : xi)
    if (!std::isfinite(c)) throw DomainError("state has a non-finite coordinate");
  if (!model.contains(xi)) throw DomainError("state lies outside the domain of '" + model.name + "'");
}

namespace {

void require_time(const ModelSpec& model, const State& xi, double t) {
  if (!(t >= 0.0)) throw HorizonError("time must be nonnegative");
  const double t_star = model.exit_time(xi);
  if (t > t_star + kTimeTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "time " << t << " exceeds the exit time " << t_star;
    throw HorizonError(msg.str());
  }
}

}  // namespace

double hazard_along_flow(const ModelSpec& model, const State& xi, double t) {
  require_in_domain(model, xi);
  require_time(model, xi, t);
  return model.hazard(model.flow(xi, t));
}

namespace unchecked {

double cumulative_hazard(const ModelSpec& model, const State& xi, double t,
                         const QuadratureOptions& quad) {
  if (t <= 0.0) return 0.0;
  auto integrand = [&](double s) { return model.hazard(model.flow(xi, s)); };
  return integrate(integrand, 0.0, t, quad).value;
}

double density_f(const ModelSpec& model, const State& xi, double t,
                 const QuadratureOptions& quad) {
  return model.hazard(model.flow(xi, t)) * std::exp(-unchecked::cumulative_hazard(model, xi, t, quad));
}

}  // namespace unchecked

double cumulative_hazard(const ModelSpec& model, const State& xi, double t,
                         const QuadratureOptions& quad) {
  require_in_domain(model, xi);
  require_time(model, xi, t);
  return unchecked::cumulative_hazard(model, xi, t, quad);
}

double survival_G(const ModelSpec& model, const State& xi, double t,
                  const QuadratureOptions& quad) {
  return std::exp(-cumulative_hazard(model, xi, t, quad));
}

double density_f(const ModelSpec& model, const State& xi, double t,
                 const QuadratureOptions& quad) {
  require_in_domain(model, xi);
  require_time(model, xi, t);
  return unchecked::density_f(model, xi, t, quad);
}

double exit_time_by_bisection(const std::function<State(const State&, double)>& flow,
                              const std::function<bool(const State&)>& contains,
                              const State& xi, double initial_step, double max_time,
                              double tolerance) {
  if (!contains(xi)) throw DomainError("exit_time_by_bisection: start state outside the domain");
  if (!(initial_step > 0.0) || !(tolerance > 0.0))
    throw ConfigError("exit_time_by_bisection: step and tolerance must be positive");

  double inside = 0.0;
  double step = initial_step;
  double outside = -1.0;
  while (inside < max_time) {
    const double probe = std::min(inside + step, max_time);
    if (!contains(flow(xi, probe))) {
      outside = probe;
      break;
    }
    inside = probe;
    step *= 2.0;
  }
  if (outside < 0.0) return kInfiniteTime;

  while (outside - inside > tolerance) {
    const double mid = 0.5 * (inside + outside);
    if (mid <= inside || mid >= outside) break;
    (contains(flow(xi, mid)) ? inside : outside) = mid;
  }
  return outside;
}

}  // namespace pdmp
