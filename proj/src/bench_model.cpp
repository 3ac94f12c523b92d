#include "pdmp/bench_model.hpp"

#include <cmath>
#include <numbers>

#include "pdmp/errors.hpp"

namespace pdmp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance from x (|x| <= 1) to the unit circle along direction (c, s).
double distance_to_circle(double x1, double x2, double c, double s) {
  const double b = x1 * c + x2 * s;
  const double rest = std::max(0.0, 1.0 - (x1 * x1 + x2 * x2));
  const double root = std::sqrt(rest + b * b);
  // Avoid cancellation when moving outward from near the circle.
  return b > 0.0 ? rest / (b + root) : root - b;
}

}  // namespace

void BenchParams::validate() const {
  if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
  if (!(base_rate > 0.0)) throw ConfigError("base_rate must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0 / std::numbers::sqrt2))
    throw ConfigError("epsilon must lie in (0, 1/sqrt(2))");
  if (max_rejection_attempts == 0) throw ConfigError("max_rejection_attempts must be positive");
}

double bench_exit_time(double x1, double x2, double theta) {
  if (!(x1 * x1 + x2 * x2 < 1.0)) throw DomainError("bench_exit_time: position must satisfy |x| < 1");
  return distance_to_circle(x1, x2, std::cos(theta), std::sin(theta));
}

double bench_kernel_normalizer(double x1, double x2, double sigma2, bool force_quadrature) {
  const double r = std::hypot(x1, x2);
  const double untruncated = kTwoPi * kTwoPi * sigma2;
  const double gap = std::max(0.0, 1.0 - r);
  if (!force_quadrature && gap * gap / (2.0 * sigma2) > 40.0) return untruncated;

  // K_x = 2 pi sigma2 (2 pi - D) with D = int exp(-d(phi)^2 / (2 sigma2)) dphi,
  // d(phi) the distance to the circle. Only directions within delta of the
  // outward normal have d below the cutoff radius; beyond it the integrand is
  // under e^-40.
  const double cutoff = std::sqrt(80.0 * sigma2);
  double delta = std::numbers::pi;
  if (r > 0.0) {
    const double c = (1.0 - r * r - cutoff * cutoff) / (2.0 * r * cutoff);
    if (c >= 1.0) return untruncated;
    if (c > -1.0) delta = std::acos(c);
  }
  const double psi = r > 0.0 ? std::atan2(x2, x1) : 0.0;
  auto lost = [&](double a) {
    const double d = distance_to_circle(x1, x2, std::cos(psi + a), std::sin(psi + a));
    return std::exp(-d * d / (2.0 * sigma2));
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-13;
  opts.initial_intervals = 4;
  const double deficit = 2.0 * integrate(lost, 0.0, delta, opts).value;
  return kTwoPi * sigma2 * (kTwoPi - deficit);
}

ModelSpec build_bench_model(const BenchParams& params) {
  params.validate();
  const BenchParams p = params;

  ModelSpec m;
  m.name = "bench";
  m.state_dim = 3;
  m.flow = [](const State& xi, double t) {
    return State{xi[0] + t * std::cos(xi[2]), xi[1] + t * std::sin(xi[2]), xi[2]};
  };
  m.hazard = [p](const State& xi) { return p.base_rate + std::hypot(xi[0], xi[1]); };
  m.hazard_envelope = [p](double) { return p.base_rate + 1.0; };
  m.contains = [](const State& xi) {
    return xi.size() == 3 && xi[0] * xi[0] + xi[1] * xi[1] < 1.0 && xi[2] > 0.0 && xi[2] < kTwoPi;
  };
  m.exit_time = [](const State& xi) {
    return distance_to_circle(xi[0], xi[1], std::cos(xi[2]), std::sin(xi[2]));
  };
  m.exit_time_sup = 2.0;
  m.kernel_density = [p](const State& xi, double s, const State& y) {
    if (y[0] * y[0] + y[1] * y[1] > 1.0 || !(y[2] > 0.0 && y[2] < kTwoPi)) return 0.0;
    const double c1 = xi[0] + s * std::cos(xi[2]);
    const double c2 = xi[1] + s * std::sin(xi[2]);
    const double d2 = (y[0] - c1) * (y[0] - c1) + (y[1] - c2) * (y[1] - c2);
    return std::exp(-d2 / (2.0 * p.sigma2)) / bench_kernel_normalizer(c1, c2, p.sigma2);
  };
  m.kernel_sampler = [p](const State& xi, double s, Rng& rng) {
    const double c1 = xi[0] + s * std::cos(xi[2]);
    const double c2 = xi[1] + s * std::sin(xi[2]);
    const double sd = std::sqrt(p.sigma2);
    for (std::size_t attempt = 0; attempt < p.max_rejection_attempts; ++attempt) {
      const double y1 = c1 + sd * rng.normal();
      const double y2 = c2 + sd * rng.normal();
      if (y1 * y1 + y2 * y2 < 1.0) return State{y1, y2, kTwoPi * rng.uniform_open()};
    }
    throw SamplingError("bench kernel: truncated Gaussian rejection sampler exhausted its attempts");
  };
  return m;
}

State bench_origin(double theta) { return State{0.0, 0.0, theta}; }

RegionSpec bench_region_A(const BenchParams& params) {
  params.validate();
  const double e = params.epsilon;
  RegionSpec A = box_region("A", Box{{-e, -e, 0.0}, {e, e, kTwoPi}}, {0, 1}, true);
  A.exit_time_inf = 1.0 - e * std::numbers::sqrt2;
  return A;
}

RegionSpec bench_domain() {
  RegionSpec D;
  D.label = "D";
  D.diameter = 2.0;
  D.bounds = Box{{-1.0, -1.0, 0.0}, {1.0, 1.0, kTwoPi}};
  D.membership = [](const State& x) { return x[0] * x[0] + x[1] * x[1] < 1.0; };
  return D;
}

PartitionSpec bench_partition(const BenchParams& params) {
  const RegionSpec A = bench_region_A(params);
  return PartitionSpec{{A, difference_region("D\\A", bench_domain(), A)}};
}

}  // namespace pdmp
