#include "pdmp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

void OracleConfig::validate() const {
  if (!(quad_tol > 0.0)) throw ConfigError("oracle quad_tol must be positive");
  if (mc_samples < 1000) throw ConfigError("oracle mc_samples must be at least 1000");
  if (initial_intervals == 0) throw ConfigError("oracle initial_intervals must be positive");
}

QuadratureOptions OracleConfig::quadrature() const {
  QuadratureOptions q;
  q.abs_tol = quad_tol;
  return q;
}

namespace {

// Inner cumulative-hazard integrals are one level below the oracle integral;
// they are kept an order of magnitude tighter so their error does not
// dominate.
QuadratureOptions inner_options(const OracleConfig& cfg) {
  QuadratureOptions q = cfg.quadrature();
  q.abs_tol = cfg.quad_tol * 0.1;
  return q;
}

QuadratureOptions outer_options(const OracleConfig& cfg) {
  QuadratureOptions q = cfg.quadrature();
  q.initial_intervals = cfg.initial_intervals;
  q.max_intervals = 20000;
  return q;
}

void require_pair(const ModelSpec& model, const State& x, const State& y, double t) {
  require_in_domain(model, x);
  require_in_domain(model, y);
  if (!(t >= 0.0) || t > model.exit_time(x) + kTimeTolerance) {
    std::ostringstream msg;
    msg << "time " << t << " outside [0, t*(x)]";
    throw HorizonError(msg.str());
  }
}

double fq(const ModelSpec& model, const State& x, double t, const State& y, const OracleConfig& cfg) {
  const double q = model.kernel_density(x, t, y);
  if (q == 0.0) return 0.0;
  return unchecked::density_f(model, x, t, inner_options(cfg)) * q;
}

double gq(const ModelSpec& model, const State& x, double t, const State& y, const OracleConfig& cfg) {
  return std::exp(-unchecked::cumulative_hazard(model, x, t, inner_options(cfg))) *
         model.kernel_density(x, t, y);
}

// Initial panels for an integral over a span of length len. The density is
// cfg.initial_intervals per longest possible flow (exit_time_sup, else t*(x)),
// so short flows near the boundary are not over-subdivided.
std::size_t panel_count(const ModelSpec& model, double t_star, double len, const OracleConfig& cfg) {
  const double span = model.exit_time_sup ? std::max(*model.exit_time_sup, t_star) : t_star;
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(static_cast<double>(cfg.initial_intervals) * len / span)));
}

// H(x, y, t_k) for nondecreasing times t_k in [0, t*(x)]. The tail integral
// is assembled from the pieces between consecutive times.
std::vector<double> H_at_times(const ModelSpec& model, const State& x, const State& y,
                               std::span<const double> times, const OracleConfig& cfg) {
  const double t_star = model.exit_time(x);
  if (!std::isfinite(t_star)) throw ConfigError("H requires a finite exit time");
  std::vector<double> out(times.size());
  double acc = gq(model, x, t_star, y, cfg);
  double upper = t_star;
  for (std::size_t k = times.size(); k-- > 0;) {
    const double lower = std::min(times[k], t_star);
    if (lower < upper) {
      QuadratureOptions q = outer_options(cfg);
      q.initial_intervals = panel_count(model, t_star, upper - lower, cfg);
      acc += integrate([&](double s) { return fq(model, x, s, y, cfg); }, lower, upper, q).value;
      upper = lower;
    }
    out[k] = acc;
  }
  return out;
}

double H_unchecked(const ModelSpec& model, const State& x, const State& y, double t,
                   const OracleConfig& cfg) {
  const double times[] = {t};
  return H_at_times(model, x, y, times, cfg).front();
}

// fQ~ / H. H is positive in exact arithmetic, but with a sharply peaked
// kernel it underflows once t is past every s where y is reachable.
double hazard_ratio(const ModelSpec& model, const State& x, const State& y, double t,
                    const OracleConfig& cfg) {
  const double h = H_unchecked(model, x, y, t, cfg);
  if (h == 0.0) {
    std::ostringstream msg;
    msg << "lambda~: H(x, y, " << t << ") underflows to 0";
    throw NumericalError(msg.str(), cfg.quad_tol, 0.0);
  }
  return fq(model, x, t, y, cfg) / h;
}

}  // namespace

double fQ_tilde(const ModelSpec& model, const State& x, double t, const State& y,
                const OracleConfig& cfg) {
  require_pair(model, x, y, t);
  return fq(model, x, t, y, cfg);
}

double GQ_tilde(const ModelSpec& model, const State& x, double t, const State& y,
                const OracleConfig& cfg) {
  require_pair(model, x, y, t);
  return gq(model, x, t, y, cfg);
}

double H_fn(const ModelSpec& model, const State& x, const State& y, double t,
            const OracleConfig& cfg) {
  cfg.validate();
  require_pair(model, x, y, t);
  return H_unchecked(model, x, y, t, cfg);
}

double lambda_tilde(const ModelSpec& model, const State& x, const State& y, double t,
                    const OracleConfig& cfg) {
  cfg.validate();
  require_pair(model, x, y, t);
  return hazard_ratio(model, x, y, t, cfg);
}

double G_tilde(const ModelSpec& model, const State& x, const State& y, double t,
               const OracleConfig& cfg) {
  cfg.validate();
  require_pair(model, x, y, t);
  if (t == 0.0) return 1.0;
  // One pass, so the ratio cannot exceed 1 through independent rounding.
  const double times[] = {0.0, t};
  const std::vector<double> h = H_at_times(model, x, y, times, cfg);
  if (h[0] == 0.0) throw NumericalError("G~: H(x, y, 0) underflows to 0", cfg.quad_tol, 0.0);
  return h[1] / h[0];
}

double G_tilde_by_integration(const ModelSpec& model, const State& x, const State& y, double t,
                              const OracleConfig& cfg) {
  cfg.validate();
  require_pair(model, x, y, t);
  if (t == 0.0) return 1.0;
  // H on an anchor grid; H(s) is then the anchor value above s plus a short
  // integral, instead of a full tail integral per evaluation.
  const double t_star = model.exit_time(x);
  const std::size_t n = 4 * panel_count(model, t_star, t_star, cfg);
  std::vector<double> anchors(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    anchors[k] = t_star * static_cast<double>(k) / static_cast<double>(n);
  const std::vector<double> h_anchor = H_at_times(model, x, y, anchors, cfg);
  // fQ~ peaks near 1e4 for sigma2 = 1e-4; an absolute tolerance alone would
  // ask for digits below round-off.
  QuadratureOptions piece = cfg.quadrature();
  piece.abs_tol = cfg.quad_tol * 0.1;
  piece.rel_tol = 1e-13;
  auto H_at = [&](double s) {
    const std::size_t k = static_cast<std::size_t>(
        std::upper_bound(anchors.begin(), anchors.end(), s) - anchors.begin());
    if (k > n) return h_anchor[n];
    return h_anchor[k] +
           integrate([&](double u) { return fq(model, x, u, y, cfg); }, s, anchors[k], piece).value;
  };
  QuadratureOptions q = outer_options(cfg);
  q.abs_tol = cfg.quad_tol * 10.0;
  q.rel_tol = 1e-12;
  q.initial_intervals = panel_count(model, t_star, t, cfg);
  const double cumulative = integrate(
      [&](double s) {
        const double h = H_at(s);
        if (h == 0.0) throw NumericalError("G~ by integration: H underflows to 0", cfg.quad_tol, 0.0);
        return fq(model, x, s, y, cfg) / h;
      },
      0.0, t, q).value;
  return std::exp(-cumulative);
}

std::optional<double> H_lower_bound(const ModelSpec& model, const OracleConfig& cfg) {
  if (!model.density_lower_bound || !model.has_envelope() || !model.exit_time_sup) return std::nullopt;
  const double envelope_mass =
      integrate(model.hazard_envelope, 0.0, *model.exit_time_sup, cfg.quadrature()).value;
  return *model.density_lower_bound * std::exp(-envelope_mass);
}

Trajectory oracle_chain(const ModelSpec& model, const State& x0, const OracleConfig& cfg) {
  cfg.validate();
  Trajectory full = simulate_chain(model, x0, cfg.burn_in + cfg.mc_samples, cfg.seed);
  Trajectory kept;
  kept.seed = full.seed;
  kept.records.assign(full.records.begin() + static_cast<std::ptrdiff_t>(cfg.burn_in),
                      full.records.end());
  // The first kept record becomes the chain's starting point.
  kept.records.front().s = 0.0;
  kept.records.front().forced = false;
  return kept;
}

std::vector<McEstimate> l_tilde_from_pairs(const ModelSpec& model, const Trajectory& traj,
                                           const RegionSpec& A, const RegionSpec& B,
                                           std::span<const double> times,
                                           const OracleConfig& cfg) {
  cfg.validate();
  if (!A.exit_time_inf)
    throw ConfigError("exit time of region '" + A.label + "' is unknown; resolve it first");
  for (double t : times)
    if (!(t >= 0.0 && t < *A.exit_time_inf)) throw ConfigError("l~ needs 0 <= t < t*(A)");

  const std::size_t nt = times.size();
  // 0 followed by the requested times in increasing order.
  std::vector<double> sorted{0.0};
  sorted.insert(sorted.end(), times.begin(), times.end());
  std::sort(sorted.begin() + 1, sorted.end());
  std::vector<double> sum_a(nt, 0.0), sum_g(nt, 0.0);
  std::vector<std::vector<double>> a(nt), g(nt);
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
    const State& x = traj.records[i].z;
    const State& y = traj.records[i + 1].z;
    if (!A.contains(x) || !B.contains(y)) continue;
    const std::vector<double> h = H_at_times(model, x, y, sorted, cfg);
    const double h0 = h.front();
    for (std::size_t k = 0; k < nt; ++k) {
      const double ak = fq(model, x, times[k], y, cfg) / h0;
      const std::size_t pos = static_cast<std::size_t>(
          std::lower_bound(sorted.begin() + 1, sorted.end(), times[k]) - sorted.begin());
      const double gk = h[pos] / h0;
      a[k].push_back(ak);
      g[k].push_back(gk);
      sum_a[k] += ak;
      sum_g[k] += gk;
    }
  }
  if (a.empty() || (nt > 0 && a[0].empty()))
    throw UndefinedEstimatorError("no transition from '" + A.label + "' to '" + B.label +
                                  "'; l~ is undefined");

  std::vector<McEstimate> out(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const double ratio = sum_a[k] / sum_g[k];
    double resid = 0.0;
    for (std::size_t j = 0; j < a[k].size(); ++j) resid += std::pow(a[k][j] - ratio * g[k][j], 2);
    out[k] = {ratio, std::sqrt(resid) / sum_g[k], a[k].size()};
  }
  return out;
}

std::vector<McEstimate> l_tilde_mc(const ModelSpec& model, const State& x0, const RegionSpec& A,
                                   const RegionSpec& B, std::span<const double> times,
                                   const OracleConfig& cfg) {
  return l_tilde_from_pairs(model, oracle_chain(model, x0, cfg), A, B, times, cfg);
}

McEstimate l_tilde_mc(const ModelSpec& model, const State& x0, const RegionSpec& A,
                      const RegionSpec& B, double t, const OracleConfig& cfg) {
  const double times[] = {t};
  return l_tilde_mc(model, x0, A, B, times, cfg).front();
}

McEstimate H_tilde_from(const Trajectory& traj, const RegionSpec& A, const RegionSpec& B, double t) {
  std::size_t n_visits = 0, hits = 0;
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
    if (!A.contains(traj.records[i].z)) continue;
    ++n_visits;
    if (B.contains(traj.records[i + 1].z) && traj.records[i + 1].s > t) ++hits;
  }
  if (n_visits == 0)
    throw UndefinedEstimatorError("region '" + A.label + "' is never visited; H~ is undefined");
  const double p = static_cast<double>(hits) / static_cast<double>(n_visits);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_visits)), n_visits};
}

McEstimate H_tilde_mc(const ModelSpec& model, const State& x0, const RegionSpec& A,
                      const RegionSpec& B, double t, const OracleConfig& cfg) {
  if (A.exit_time_inf && !(t < *A.exit_time_inf)) throw ConfigError("H~ needs t < t*(A)");
  return H_tilde_from(oracle_chain(model, x0, cfg), A, B, t);
}

double bench_exact_f(double t) {
  if (!(t >= 0.0)) throw HorizonError("bench_exact_f needs t >= 0");
  return (5.0 + t) * std::exp(-t * (5.0 + t / 2.0));
}

}  // namespace pdmp
