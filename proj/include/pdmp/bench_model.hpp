#pragma once

#include <cstddef>

#include "pdmp/model.hpp"
#include "pdmp/region.hpp"

namespace pdmp {

// Run-and-tumble motion on the unit disk D. State (x1, x2, theta): the
// position moves at unit speed in direction theta; jumps happen at rate
// base_rate + |x| or on hitting the circle, and relocate the position by a
// Gaussian of variance sigma2 truncated to D while redrawing theta uniformly
// on (0, 2 pi).
struct BenchParams {
  double sigma2 = 1e-4;
  double base_rate = 5.0;
  double epsilon = 0.1;  // half-width of A = ]-eps, eps[^2
  std::size_t max_rejection_attempts = 1'000'000;

  void validate() const;
};

// Positive root of |x + t (cos theta, sin theta)| = 1. DomainError if |x| >= 1.
double bench_exit_time(double x1, double x2, double theta);

// K_x = 2 pi * int_D exp(-|y - x|^2 / (2 sigma2)) dy for x in the closed disk.
// The disk integral is taken in polar coordinates around x with the radial
// part in closed form; when the truncated mass is below double precision the
// untruncated value 4 pi^2 sigma2 is returned unless force_quadrature is set.
double bench_kernel_normalizer(double x1, double x2, double sigma2, bool force_quadrature = false);

ModelSpec build_bench_model(const BenchParams& params = {});

// (0, 0, theta).
State bench_origin(double theta);

// A = ]-eps, eps[^2 (any angle) with its exact exit time 1 - eps sqrt(2).
RegionSpec bench_region_A(const BenchParams& params = {});

// The whole open state space.
RegionSpec bench_domain();

// {A, D \ A}.
PartitionSpec bench_partition(const BenchParams& params = {});

}  // namespace pdmp
