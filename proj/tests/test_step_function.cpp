#include <catch_amalgamated.hpp>

#include <pdmp/errors.hpp>
#include <pdmp/step_function.hpp>

using namespace pdmp;

TEST_CASE("right-continuous evaluation") {
  StepFunction f({0.2, 0.5}, {1, 2}, 0);
  CHECK(f(0.0) == 0);
  CHECK(f(0.2) == 1);
  CHECK(f(0.3) == 1);
  CHECK(f(0.5) == 2);
  CHECK(f(9.0) == 2);
  CHECK(f.left_limit(0.5) == 1);
  CHECK(f.left_limit(0.2) == 0);
}

TEST_CASE("left-continuous evaluation") {
  StepFunction y({0.2, 0.5}, {1, 0}, 2, StepFunction::Side::left);
  CHECK(y(0.2) == 2);
  CHECK(y(0.3) == 1);
  CHECK(y(0.5) == 1);
  CHECK(y(0.50001) == 0);
}

TEST_CASE("empty and invalid") {
  StepFunction zero;
  CHECK(zero(1.0) == 0.0);
  CHECK_THROWS(StepFunction({0.5, 0.2}, {1, 2}, 0));
  CHECK_THROWS(StepFunction({0.2, 0.2}, {1, 2}, 0));
  CHECK_THROWS(StepFunction({0.2}, {1, 2}, 0));
}
