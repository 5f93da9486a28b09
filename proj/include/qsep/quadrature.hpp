// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace qsep::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  Result& operator+=(const Result& other) {
    value += other.value;
    error += other.error;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
  }
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (nodes in [0, 1]).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.0,
    0.14887433898163122,
    0.29439286270146020,
    0.43339539412924721,
    0.56275713466860466,
    0.67940956829902444,
    0.78081772658641690,
    0.86506336668898454,
    0.93015749135570824,
    0.97390652851717174,
    0.99565716302580809,
};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.14944555400291690, 0.14773910490133849, 0.14277593857706009, 0.13470921731147334,
    0.12349197626206584, 0.10938715880229764, 0.09312545458369760, 0.07503967481091996,
    0.05475589657435200, 0.03255816230796473, 0.01169463886737187,
};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.29552422471475287, 0.26926671930999635, 0.21908636251598204,
    0.14945134915058059, 0.06667134430868814,
};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(center);
  double kronrod = f0 * kKronrodWeights[0];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  std::array<double, 21> values{};
  values[0] = f0;
  for (std::size_t k = 1; k < 11; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double lo = f(center - dx);
    const double hi = f(center + dx);
    values[2 * k - 1] = lo;
    values[2 * k] = hi;
    kronrod += kKronrodWeights[k] * (lo + hi);
    abs_sum += kKronrodWeights[k] * (std::abs(lo) + std::abs(hi));
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * (lo + hi);
  }
  // Spread of f around its mean, as in QUADPACK's resasc.
  const double mean = 0.5 * kronrod;
  double spread = kKronrodWeights[0] * std::abs(f0 - mean);
  for (std::size_t k = 1; k < 11; ++k) {
    spread += kKronrodWeights[k] *
              (std::abs(values[2 * k - 1] - mean) + std::abs(values[2 * k] - mean));
  }
  const double scale = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  spread *= scale;
  abs_sum *= scale;
  if (spread != 0.0 && error != 0.0) {
    error = spread * std::min(1.0, std::pow(200.0 * error / spread, 1.5));
  }
  const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    error = std::max(error, round_floor);
  }
  return {a, b, kronrod * half, error};
}

}  // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
///
/// The interval with the largest error estimate is bisected until the total
/// estimate meets max(abs_tol, rel_tol * |I|). Nodes never touch a or b, so
/// integrable endpoint singularities are allowed.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
  Result out;
  if (a == b) return out;
  std::priority_queue<detail::Segment> heap;
  std::vector<detail::Segment> settled;
  const detail::Segment first = detail::gauss_kronrod_21(f, a, b);
  out.evaluations = 21;
  heap.push(first);
  double value = first.value;
  double error = first.error;
  std::size_t intervals = 1;
  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
  while (!heap.empty() && error > tolerance()) {
    if (intervals >= opts.max_intervals) {
      out.converged = false;
      break;
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      settled.push_back(worst);  // too narrow to split further
      continue;
    }
    const detail::Segment left = detail::gauss_kronrod_21(f, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod_21(f, mid, worst.b);
    out.evaluations += 42;
    ++intervals;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from scratch to shed the drift of the running totals.
  double v = 0.0;
  double c = 0.0;
  double e = 0.0;
  auto add = [&](const detail::Segment& s) {
    const double y = s.value - c;
    const double t = v + y;
    c = (t - v) - y;
    v = t;
    e += s.error;
  };
  for (const auto& s : settled) add(s);
  while (!heap.empty()) {
    add(heap.top());
    heap.pop();
  }
  out.value = v;
  out.error = e;
  if (!std::isfinite(v)) out.converged = false;
  if (out.converged && e > std::max(opts.abs_tol, opts.rel_tol * std::abs(v))) {
    out.converged = false;
  }
  return out;
}

/// Integrates piecewise over consecutive breakpoints (sorted, at least two).
template <class F>
Result integrate_pieces(F&& f, std::span<const double> points, const Options& opts = {}) {
  Result out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] > points[i]) out += integrate(f, points[i], points[i + 1], opts);
  }
  return out;
}

}  // namespace qsep::quad
