#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pdmp/errors.hpp"

namespace pdmp {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
  // The range (or each piece between breakpoints) is first cut into this
  // many equal parts. Raise it for integrands with features narrower than
  // the 21-point rule can see on the whole range.
  std::size_t initial_intervals = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// 21-point Kronrod nodes (non-negative half) with the embedded 10-point
// Gauss weights. Index 0 is the centre node.
struct Gk21Rule {
  std::array<double, 11> nodes;
  std::array<double, 11> kronrod_weights;
  std::array<double, 11> gauss_weights;  // zero where the node is Kronrod-only
};

const Gk21Rule& gk21();

struct Segment {
  double a, b, value, error, abs_dev, abs_value;
};

template <class F>
Segment apply_gk21(F& f, double a, double b) {
  const Gk21Rule& rule = gk21();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv;
  fv[0] = f(centre);
  for (std::size_t i = 1; i < 11; ++i) {
    fv[2 * i - 1] = f(centre - half * rule.nodes[i]);
    fv[2 * i] = f(centre + half * rule.nodes[i]);
  }
  double kronrod = fv[0] * rule.kronrod_weights[0];
  double gauss = 0.0;
  double abs_k = std::abs(fv[0]) * rule.kronrod_weights[0];
  for (std::size_t i = 1; i < 11; ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += rule.kronrod_weights[i] * pair;
    gauss += rule.gauss_weights[i] * pair;
    abs_k += rule.kronrod_weights[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
  }
  const double mean = 0.5 * kronrod;
  double dev = rule.kronrod_weights[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < 11; ++i)
    dev += rule.kronrod_weights[i] *
           (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  Segment s{a, b, kronrod * half, std::abs((kronrod - gauss) * half), dev * std::abs(half),
            abs_k * std::abs(half)};
  // QUADPACK error scaling and round-off floor.
  if (s.abs_dev != 0.0 && s.error != 0.0)
    s.error = s.abs_dev * std::min(1.0, std::pow(200.0 * s.error / s.abs_dev, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (s.abs_value > std::numeric_limits<double>::min() / (50.0 * eps))
    s.error = std::max(s.error, 50.0 * eps * s.abs_value);
  return s;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (21 point) integration of f over [a, b].
// Breakpoints strictly inside (a, b) are forced interval boundaries.
// Converged when the summed error estimate is at most
// max(abs_tol, rel_tol * |value|); otherwise NumericalError is thrown with the
// achieved error attached.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {}) {
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw ConfigError("integrate: bounds must be finite");
  if (a == b) return {};
  if (b < a) {
    QuadratureResult r = integrate(f, b, a, opts, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto worse = [](const detail::Segment& l, const detail::Segment& r) { return l.error < r.error; };
  std::priority_queue<detail::Segment, std::vector<detail::Segment>, decltype(worse)> heap(worse);

  QuadratureResult out;
  const std::size_t pieces = std::max<std::size_t>(1, opts.initial_intervals);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double width = (cuts[c + 1] - cuts[c]) / static_cast<double>(pieces);
    for (std::size_t k = 0; k < pieces; ++k) {
      const double lo = cuts[c] + width * static_cast<double>(k);
      const double hi = (k + 1 == pieces) ? cuts[c + 1] : lo + width;
      heap.push(detail::apply_gk21(f, lo, hi));
      out.evaluations += 21;
    }
  }

  auto totals = [&heap]() {
    // priority_queue does not expose iteration; copy is cheap relative to f.
    auto copy = heap;
    double value = 0.0, error = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (heap.size() >= opts.max_intervals) {
      throw NumericalError("integrate: tolerance not reached on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           std::max(opts.abs_tol, opts.rel_tol * std::abs(value)), error);
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericalError("integrate: interval cannot be split further",
                           std::max(opts.abs_tol, opts.rel_tol * std::abs(value)), error);
    }
    const detail::Segment left = detail::apply_gk21(f, worst.a, mid);
    const detail::Segment right = detail::apply_gk21(f, mid, worst.b);
    out.evaluations += 42;
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }

  std::tie(out.value, out.error) = totals();
  return out;
}

}  // namespace pdmp
