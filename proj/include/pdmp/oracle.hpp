#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/region.hpp"
#include "pdmp/simulator.hpp"

namespace pdmp {

struct OracleConfig {
  double quad_tol = 1e-10;
  std::size_t mc_samples = 1'000'000;  // chain transitions kept after burn-in
  std::size_t burn_in = 1000;
  std::uint64_t seed = 20240607;
  // Initial subdivisions for integrals of f Q~ over time; the kernel density
  // may be sharply peaked in s.
  std::size_t initial_intervals = 64;

  void validate() const;
  QuadratureOptions quadrature() const;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// f(x, t) Q~(x, t, y).
double fQ_tilde(const ModelSpec& model, const State& x, double t, const State& y,
                const OracleConfig& cfg = {});
// G(x, t) Q~(x, t, y).
double GQ_tilde(const ModelSpec& model, const State& x, double t, const State& y,
                const OracleConfig& cfg = {});

// H(x, y, t) = int_t^{t*(x)} f Q~(x, s, y) ds + G Q~(x, t*(x), y).
double H_fn(const ModelSpec& model, const State& x, const State& y, double t,
            const OracleConfig& cfg = {});

// Hazard of S_{n+1} given (Z_n, Z_{n+1}) = (x, y): f Q~(x, t, y) / H(x, y, t).
double lambda_tilde(const ModelSpec& model, const State& x, const State& y, double t,
                    const OracleConfig& cfg = {});

// Survival function of lambda_tilde: H(x, y, t) / H(x, y, 0).
double G_tilde(const ModelSpec& model, const State& x, const State& y, double t,
               const OracleConfig& cfg = {});

// The same survival function through exp(-int_0^t lambda_tilde ds), with the
// hazard integrated numerically. Independent of G_tilde's closed ratio.
double G_tilde_by_integration(const ModelSpec& model, const State& x, const State& y, double t,
                              const OracleConfig& cfg = {});

// m_2 = m exp(-int_0^{sup t*} M), the lower bound of H; needs the model's
// density_lower_bound, hazard_envelope and exit_time_sup.
std::optional<double> H_lower_bound(const ModelSpec& model, const OracleConfig& cfg = {});

// Cell-averaged conditional hazard
//   l~(A, B, t) = E_nu~[lambda~ G~ ; A x B] / E_nu~[G~ ; A x B]
// from the (Z_i, Z_{i+1}) pairs of a long chain started at x0 (burn-in
// discarded), with a delta-method standard error. UndefinedEstimatorError
// when no pair lands in A x B.
std::vector<McEstimate> l_tilde_mc(const ModelSpec& model, const State& x0, const RegionSpec& A,
                                   const RegionSpec& B, std::span<const double> times,
                                   const OracleConfig& cfg = {});
McEstimate l_tilde_mc(const ModelSpec& model, const State& x0, const RegionSpec& A,
                      const RegionSpec& B, double t, const OracleConfig& cfg = {});

// Same ratio over the pairs of a given trajectory.
std::vector<McEstimate> l_tilde_from_pairs(const ModelSpec& model, const Trajectory& traj,
                                           const RegionSpec& A, const RegionSpec& B,
                                           std::span<const double> times,
                                           const OracleConfig& cfg = {});

// H~(A, B, t) = P_nu(S_1 > t, Z_1 in B | Z_0 in A) as a long-run frequency
// over a given trajectory, with a binomial standard error.
McEstimate H_tilde_from(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B, double t);

// H_tilde_from over an independent chain simulated from x0 (burn-in dropped).
McEstimate H_tilde_mc(const ModelSpec& model, const State& x0, const RegionSpec& A,
                      const RegionSpec& B, double t, const OracleConfig& cfg = {});

// Chain used by the Monte Carlo oracles: burn_in + mc_samples transitions
// from x0 with cfg.seed, first burn_in transitions removed.
Trajectory oracle_chain(const ModelSpec& model, const State& x0, const OracleConfig& cfg);

// Sojourn density of the bench model from the origin: (5 + t) exp(-t (5 + t/2)).
double bench_exact_f(double t);

}  // namespace pdmp
