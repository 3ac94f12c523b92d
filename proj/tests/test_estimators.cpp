#include <catch_amalgamated.hpp>

#include <pdmp/bench_model.hpp>
#include <pdmp/errors.hpp>
#include <pdmp/estimators.hpp>
#include <pdmp/quadrature.hpp>
#include <pdmp/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace pdmp;
using Catch::Approx;

namespace {

RegionSpec interval(std::string label, double lo, double hi) {
  RegionSpec r;
  r.label = std::move(label);
  r.membership = [lo, hi](const State& x) { return x[0] >= lo && x[0] < hi; };
  r.diameter = hi - lo;
  r.exit_time_inf = 0.9;
  return r;
}

Trajectory hand(std::initializer_list<std::pair<double, double>> zs) {
  Trajectory t;
  for (auto [z, s] : zs) t.records.push_back({State{z}, s, false});
  return t;
}

// A = [0, 0.3), B = [0.6, 1), C = [0.3, 0.6)
const RegionSpec A = interval("A", 0.0, 0.3);
const RegionSpec B = interval("B", 0.6, 1.0);
const RegionSpec C = interval("C", 0.3, 0.6);

// A->B (0.2), B->A, A->B (0.5), B->A, A->C (0.3)
const Trajectory three = hand({{0.1, 0}, {0.7, 0.2}, {0.2, 0.4}, {0.8, 0.5}, {0.1, 0.7}, {0.4, 0.3}});

}  // namespace

TEST_CASE("counting and at-risk processes on a hand trajectory") {
  const StepFunction N = counting_N(three, A, B);
  const StepFunction Y = at_risk_Y(three, A, B);
  CHECK(N(0.1) == 0);
  CHECK(N(0.3) == 1);
  CHECK(N(0.5) == 2);
  CHECK(Y(0.0) == 2);
  CHECK(Y(0.3) == 1);
  CHECK(Y(0.5) == 1);
  CHECK(Y(0.6) == 0);
  CHECK(matched_transitions(three, A, B) == 2);
  CHECK(visits(three, A) == 3);
  CHECK(matched_sojourns(three, A, C) == std::vector<double>{0.3});
  for (double t : {0.0, 0.1, 0.2, 0.25, 0.5, 0.7})
    CHECK(N.left_limit(t) + Y(t) == 2);
  const StepFunction none = counting_N(three, C, A);
  CHECK(none(10.0) == 0);
}

TEST_CASE("generalized inverse") {
  CHECK(y_plus(0) == 0.0);
  CHECK(y_plus(1) == 1.0);
  CHECK(y_plus(4) == 0.25);
}

TEST_CASE("Nelson-Aalen steps") {
  const StepFunction L = nelson_aalen_L(three, A, B, 0.8);
  CHECK(L(0.19) == 0.0);
  CHECK(L(0.2) == 0.5);
  CHECK(L(0.5) == 1.5);
  const Trajectory single = hand({{0.1, 0}, {0.7, 0.4}});
  const StepFunction L1 = nelson_aalen_L(single, A, B, 0.8);
  CHECK(L1(0.39) == 0.0);
  CHECK(L1(0.4) == 1.0);
  CHECK(nelson_aalen_L(three, C, A, 0.8)(1.0) == 0.0);
  // events beyond the horizon are dropped
  CHECK(nelson_aalen_L(three, A, B, 0.4)(1.0) == 0.5);
  CHECK_THROWS_AS(nelson_aalen_L(three, A, B, 0.95), ConfigError);
  RegionSpec bare = A;
  bare.exit_time_inf.reset();
  CHECK_THROWS_AS(nelson_aalen_L(three, bare, B, 0.5), ConfigError);
}

TEST_CASE("ties add one increment per event") {
  const Trajectory tied = hand({{0.1, 0}, {0.7, 0.3}, {0.2, 0.1}, {0.8, 0.3}});
  CHECK(nelson_aalen_L(tied, A, B, 0.8)(0.3) == 1.0);
}

TEST_CASE("kernel smoothing of a single event") {
  const Trajectory single = hand({{0.1, 0}, {0.7, 0.5}});
  EstimatorConfig cfg;
  const double pts[] = {0.5, 0.61, 0.45};
  const auto l = smoothed_l(single, A, B, cfg, 0.1, pts);
  CHECK(l[0] == Approx(7.5).epsilon(1e-15));
  CHECK(l[1] == 0.0);
  CHECK(l[2] == Approx(10 * 0.75 * 0.75).epsilon(1e-15));
  CHECK_THROWS_AS(smoothed_l(single, A, B, cfg, 0.0, pts), ConfigError);
  const auto v = smoothed_l_variance(single, A, B, cfg, 0.1, pts);
  CHECK(v[0] == Approx(100 * 0.75 * 0.75).epsilon(1e-15));
}

TEST_CASE("smoothed rate integrates to the Nelson-Aalen mass") {
  // events well inside [0.05, 0.75] with bandwidth 0.05
  const Trajectory t = hand({{0.1, 0}, {0.7, 0.2}, {0.2, 0.4}, {0.8, 0.35}, {0.1, 0.7}, {0.9, 0.5}});
  EstimatorConfig cfg;
  const double b = 0.05;
  const double mass = integrate(
      [&](double s) {
        const double p[] = {s};
        return smoothed_l(t, A, B, cfg, b, p)[0];
      },
      cfg.r1, cfg.r2, {1e-9, 0, 4000, 1}, std::vector<double>{0.15, 0.25, 0.3, 0.4, 0.45, 0.55})
                           .value;
  CHECK(std::abs(mass - (1.0 / 3 + 1.0 / 2 + 1.0)) < 1e-8);
}

TEST_CASE("empirical survivor") {
  const RegionSpec Bp = interval("B'", 0.3, 0.6);
  const Trajectory t = hand({{0.1, 0}, {0.7, 0.2}, {0.2, 0.4}, {0.4, 0.5}});
  CHECK(empirical_survivor_p(t, A, B, 0.1) == 0.5);
  CHECK(empirical_survivor_p(t, A, B, 0.0) + empirical_survivor_p(t, A, Bp, 0.0) == 1.0);
  CHECK(empirical_survivor_p(t, A, B, 0.3) == 0.0);
  CHECK(empirical_survivor_p(t, A, Bp, 0.9) == 0.0);
  const Trajectory never = hand({{0.7, 0}, {0.8, 0.1}});
  CHECK_THROWS_AS(empirical_survivor_p(never, A, B, 0.1), UndefinedEstimatorError);
}

TEST_CASE("bandwidth rule") {
  CHECK(bandwidth_rule(1000, 1.0 / 3) == Approx(0.1).epsilon(1e-14));
  CHECK(bandwidth_rule(5330, 1.0 / 3) == Approx(0.05725).epsilon(1e-4));
  CHECK(bandwidth_rule(1, 1.0 / 3) == 1.0);
  CHECK(bandwidth_rule(three, A, B, 1.0 / 3) == Approx(std::pow(2.0, -1.0 / 3)));
  CHECK_THROWS_AS(bandwidth_rule(0, 1.0 / 3), UndefinedEstimatorError);
}

TEST_CASE("kernel and configuration checks") {
  CHECK_NOTHROW(validate_kernel(epanechnikov()));
  const double mass = integrate(epanechnikov().weight, -1.0, 1.0).value;
  CHECK(std::abs(mass - 1.0) <= 1e-10);
  SmoothingKernel box{"box", [](double u) { return std::abs(u) <= 1 ? 0.5 : 0.0; }};
  CHECK_THROWS_AS(validate_kernel(box), ConfigError);
  EstimatorConfig cfg;
  CHECK(cfg.grid().size() == 128);
  CHECK(cfg.grid().front() == 0.05);
  CHECK(cfg.grid().back() == Approx(0.75).epsilon(1e-15));
  cfg.grid_points = 1;
  CHECK(cfg.grid() == std::vector<double>{0.05});
  cfg.r2 = 0.9;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("combined estimator on hand data") {
  PartitionSpec P{{B, A, C}};
  EstimatorConfig cfg;
  cfg.grid_points = 1;
  cfg.r1 = 0.3;
  const DensityEstimate est = estimate_density_f(three, A, P, cfg);
  REQUIRE(est.values.size() == 1);
  // naive: l_B(0.3) p_B(0.3) + l_C(0.3) p_C(0.3); A->A never happens
  auto K = [](double u) { return std::abs(u) <= 1 ? 0.75 * (1 - u * u) : 0.0; };
  const double bB = std::pow(2.0, -1.0 / 3), bC = 1.0;
  const double lB = (K((0.3 - 0.2) / bB) * 0.5 + K((0.3 - 0.5) / bB) * 1.0) / bB;
  const double lC = K(0.0) * 1.0 / bC;
  const double pB = 1.0 / 3, pC = 0.0;
  CHECK(est.values[0] == Approx(lB * pB + lC * pC).epsilon(1e-15));
  CHECK(est.meta.visits == 3);
  CHECK(est.meta.transitions == 5);
  REQUIRE(est.meta.cells.size() == 3);
  CHECK(est.meta.cells[0].label == "B");
  CHECK(est.meta.cells[1].matched == 0);
  CHECK_FALSE(est.meta.cells[1].bandwidth.has_value());
}

TEST_CASE("bench estimate: nonnegative, order invariant, stays-in-A case") {
  const BenchParams params;
  const ModelSpec m = build_bench_model(params);
  const Trajectory t = simulate_chain(m, bench_origin(std::numbers::pi), 20000, 3);
  const RegionSpec Abench = bench_region_A(params);
  const PartitionSpec P = bench_partition(params);
  const EstimatorConfig cfg;
  const DensityEstimate e1 = estimate_density_f(t, Abench, P, cfg);
  const DensityEstimate e2 = estimate_density_f(t, Abench, PartitionSpec{{P.cells[1], P.cells[0]}}, cfg);
  CHECK(e1.values == e2.values);
  CHECK(std::all_of(e1.values.begin(), e1.values.end(), [](double v) { return v >= 0.0; }));
  CHECK(std::is_sorted(e1.grid.begin(), e1.grid.end()));

  // A trajectory that never leaves A: D\A contributes nothing.
  Trajectory inside;
  inside.records = {{State{0.0, 0.0, 1.0}, 0, false}, {State{0.05, 0.0, 2.0}, 0.3, false},
                    {State{0.0, 0.05, 3.0}, 0.4, false}};
  const double p[] = {0.35};
  CHECK(smoothed_l(inside, Abench, P.cells[1], cfg, 0.1, p)[0] == 0.0);
  EstimatorConfig one = cfg;
  one.grid_points = 1;
  one.r1 = 0.35;
  const DensityEstimate ei = estimate_density_f(inside, Abench, P, one);
  const double b = bandwidth_rule(2, cfg.alpha);
  const double only_A =
      smoothed_l(inside, Abench, P.cells[0], cfg, b, p)[0] * empirical_survivor_p(inside, Abench, P.cells[0], 0.35);
  CHECK(ei.values[0] == only_A);
}

TEST_CASE("density map over a partition of K") {
  const BenchParams params;
  const ModelSpec m = build_bench_model(params);
  const Trajectory t = simulate_chain(m, bench_origin(std::numbers::pi), 5000, 4);
  RegionSpec left = box_region("left", Box{{-0.1, -0.1, 0}, {0.0, 0.1, 2 * std::numbers::pi}}, {0, 1});
  RegionSpec right = box_region("right", Box{{0.0, -0.1, 0}, {0.1, 0.1, 2 * std::numbers::pi}}, {0, 1});
  left.exit_time_inf = 1 - std::hypot(0.1, 0.1);
  right.exit_time_inf = left.exit_time_inf;
  PartitionSpec K{{left, right}};
  EstimatorConfig cfg;
  const auto map = estimate_density_map(t, K, bench_partition(params), cfg);
  REQUIRE(map.size() == 2);
  for (const auto& c : map) {
    if (c.estimate) {
      CHECK(c.estimate->values.size() == 128);
    } else {
      CHECK_FALSE(c.error.empty());
    }
  }
  cfg.horizon_t = 0.87;
  cfg.horizon_mode = HorizonMode::uniform;
  CHECK_THROWS_AS(estimate_density_map(t, K, bench_partition(params), cfg), ConfigError);
}
