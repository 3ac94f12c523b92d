#include <catch_amalgamated.hpp>

#include <pdmp/errors.hpp>
#include <pdmp/quadrature.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace pdmp;
using Catch::Approx;

TEST_CASE("gk21 table matches boost nodes") {
  const auto& r = detail::gk21();
  const auto& kn = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
  REQUIRE(kn.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(r.nodes[i] == kn[i]);
  double ksum = r.kronrod_weights[0];
  double gsum = r.gauss_weights[0];
  for (std::size_t i = 1; i < 11; ++i) {
    ksum += 2 * r.kronrod_weights[i];
    gsum += 2 * r.gauss_weights[i];
  }
  CHECK(ksum == Approx(2.0).epsilon(1e-14));
  CHECK(gsum == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("polynomials and smooth functions") {
  auto cube = [](double x) { return x * x * x; };
  CHECK(integrate(cube, 0.0, 2.0).value == Approx(4.0).epsilon(1e-15));
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
        Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  // reversed bounds flip the sign
  CHECK(integrate(cube, 2.0, 0.0).value == Approx(-4.0).epsilon(1e-15));
  CHECK(integrate(cube, 1.0, 1.0).value == 0.0);
}

TEST_CASE("sojourn mean reference value") {
  // int_0^1 exp(-5s - s^2/2) ds, the bench mean sojourn from the origin.
  // Closed form through erf: sqrt(pi/2) e^{12.5} (erf(6/sqrt2) - erf(5/sqrt2)).
  const double s2 = std::sqrt(2.0);
  const double ref = std::sqrt(std::numbers::pi / 2) * std::exp(12.5) *
                     (std::erfc(5 / s2) - std::erfc(6 / s2));
  const double q = integrate([](double s) { return std::exp(-5 * s - 0.5 * s * s); }, 0.0, 1.0).value;
  CHECK(std::abs(q - ref) < 1e-12);
  CHECK(q == Approx(0.1921445043285).margin(1e-12));
}

TEST_CASE("kink needs breakpoint or subdivision") {
  auto kink = [](double x) { return std::abs(x - 0.3); };
  const double exact = 0.5 * 0.09 + 0.5 * 0.49;
  const double bp[] = {0.3};
  auto with_bp = integrate(kink, 0.0, 1.0, {}, bp);
  CHECK(std::abs(with_bp.value - exact) < 1e-14);
  CHECK(with_bp.evaluations == 42);
  auto adaptive = integrate(kink, 0.0, 1.0);
  CHECK(std::abs(adaptive.value - exact) < 1e-10);
}

TEST_CASE("narrow spike found with initial subdivision") {
  auto spike = [](double x) { return std::exp(-(x - 0.713) * (x - 0.713) / 2e-6); };
  const double exact = std::sqrt(2 * std::numbers::pi * 1e-6);
  QuadratureOptions o;
  o.initial_intervals = 64;
  CHECK(std::abs(integrate(spike, 0.0, 1.0, o).value - exact) < 1e-10);
}

TEST_CASE("non-convergence reports achieved tolerance") {
  QuadratureOptions o;
  o.abs_tol = 1e-14;
  o.max_intervals = 3;
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  try {
    integrate(f, 0.0, 1.0, o);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.requested_tolerance() == 1e-14);
    CHECK(e.achieved_tolerance() > e.requested_tolerance());
  }
  CHECK_THROWS_AS(integrate(f, 0.0, INFINITY), ConfigError);
}
