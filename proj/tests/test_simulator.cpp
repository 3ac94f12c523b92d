#include <catch_amalgamated.hpp>

#include <pdmp/bench_model.hpp>
#include <pdmp/errors.hpp>
#include <pdmp/quadrature.hpp>
#include <pdmp/simulator.hpp>
#include <pdmp/toy_model.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace pdmp;

namespace {

// sup |F_a - F_b| for two samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("hazard-free model always hits the boundary") {
  const ModelSpec m = build_drift_model(0.0);
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const Sojourn s = sample_sojourn(m, State{0.1}, rng);
    CHECK(s.forced);
    CHECK(s.time == 0.9);
  }
}

TEST_CASE("forced frequency and mean sojourn from the origin") {
  const ModelSpec m = build_bench_model();
  const State o = bench_origin(1.0);
  Rng rng(2024);
  const int n = 1'000'000;
  long forced = 0;
  double sum = 0, sum2 = 0;
  for (int k = 0; k < n; ++k) {
    const Sojourn s = sample_sojourn(m, o, rng);
    REQUIRE(s.time > 0.0);
    REQUIRE(s.time <= 1.0);
    forced += s.forced;
    sum += s.time;
    sum2 += s.time * s.time;
  }
  const double p = std::exp(-5.5);
  CHECK(std::abs(double(forced) / n - p) <= 3 * std::sqrt(p * (1 - p) / n));
  const double mean_ref =
      integrate([](double s) { return std::exp(-5 * s - 0.5 * s * s); }, 0.0, 1.0).value;
  const double mean = sum / n, sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean - mean_ref) <= 3 * sd / std::sqrt(double(n)));
}

TEST_CASE("thinning and inversion agree in law") {
  const ModelSpec m = build_bench_model();
  const State xi{0.3, -0.2, 2.2};
  SimulationOptions thin, inv;
  thin.sojourn_method = SojournMethod::thinning;
  inv.sojourn_method = SojournMethod::inversion;
  Rng r1(5), r2(6);
  const int n = 100000;
  std::vector<double> a(n), b(n);
  for (int k = 0; k < n; ++k) {
    a[k] = sample_sojourn(m, xi, r1, thin).time;
    b[k] = sample_sojourn(m, xi, r2, inv).time;
  }
  CHECK(ks_two_sample(a, b) < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("inversion respects forced jumps without an envelope") {
  ModelSpec m = build_drift_model(0.0);
  m.hazard_envelope = nullptr;
  Rng rng(3);
  const Sojourn s = sample_sojourn(m, State{0.4}, rng);
  CHECK(s.forced);
  CHECK(std::abs(s.time - 0.6) < 1e-12);
}

TEST_CASE("envelope violation is a configuration error") {
  ModelSpec m = build_bench_model();
  m.hazard = [](const State&) { return 100.0; };
  Rng rng(4);
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 1000; ++k) sample_sojourn(m, bench_origin(1.0), rng);
      }(),
      ConfigError);
}

TEST_CASE("post-jump kernel: centred position and uniform angle") {
  const ModelSpec m = build_bench_model();
  const State xi{0.1, 0.2, std::numbers::pi / 2};
  const double s = 0.3;  // flows to (0.1, 0.5)
  Rng rng(8);
  const int n = 100000;
  double m1 = 0, m2 = 0;
  std::vector<double> angle(n);
  for (int k = 0; k < n; ++k) {
    const State y = sample_postjump(m, xi, s, rng);
    REQUIRE(m.contains(y));
    m1 += y[0];
    m2 += y[1];
    angle[k] = y[2];
  }
  const double se = std::sqrt(1e-4 / n);
  CHECK(std::abs(m1 / n - 0.1) < 3 * se);
  CHECK(std::abs(m2 / n - 0.5) < 3 * se);
  std::sort(angle.begin(), angle.end());
  double d = 0;
  for (int k = 0; k < n; ++k) {
    const double F = angle[k] / (2 * std::numbers::pi);
    d = std::max({d, std::abs(F - double(k) / n), std::abs(F - double(k + 1) / n)});
  }
  CHECK(d < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("rejection sampler gives up") {
  ModelSpec m = build_bench_model();
  m.kernel_sampler = [](const State&, double, Rng&) { return State{5.0, 5.0, 0.0}; };
  SimulationOptions o;
  o.max_rejection_attempts = 10;
  Rng rng(1);
  CHECK_THROWS_AS(sample_postjump(m, bench_origin(1.0), 0.1, rng, o), SamplingError);
}

TEST_CASE("chain shape, invariants and determinism") {
  const ModelSpec m = build_bench_model();
  const State x0 = bench_origin(std::numbers::pi);
  const Trajectory one = simulate_chain(m, x0, 1, 9);
  REQUIRE(one.records.size() == 2);
  CHECK(one.records[0].z == x0);
  CHECK(one.records[0].s == 0.0);
  CHECK_FALSE(one.records[0].forced);

  const Trajectory a = simulate_chain(m, x0, 5000, 9);
  const Trajectory b = simulate_chain(m, x0, 5000, 9);
  const Trajectory c = simulate_chain(m, x0, 5000, 10);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.seed == 9);
  CHECK(a.transitions() == 5000);
  CHECK_NOTHROW(check_trajectory(m, a));
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    const double ts = m.exit_time(a.records[i - 1].z);
    CHECK(a.records[i].forced == (std::abs(a.records[i].s - ts) <= kTimeTolerance));
  }
  const auto T = a.jump_times();
  REQUIRE(T.size() == a.records.size());
  CHECK(T[0] == 0.0);
  CHECK(std::is_sorted(T.begin(), T.end()));
}

TEST_CASE("check_trajectory rejects broken records") {
  const ModelSpec m = build_bench_model();
  Trajectory t = simulate_chain(m, bench_origin(1.0), 10, 1);
  Trajectory late = t;
  late.records[3].s = 5.0;
  CHECK_THROWS(check_trajectory(m, late));
  Trajectory outside = t;
  outside.records[2].z = State{2.0, 0.0, 0.0};
  CHECK_THROWS_AS(check_trajectory(m, outside), DomainError);
  Trajectory flag = t;
  flag.records[4].forced = !flag.records[4].forced;
  CHECK_THROWS(check_trajectory(m, flag));
  CHECK_THROWS_AS(simulate_chain(m, bench_origin(1.0), 0, 1), ConfigError);
}
