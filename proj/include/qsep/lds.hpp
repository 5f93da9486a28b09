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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

/// Generalized golden-ratio (Korobov-type) quasirandom sequences.
///
/// The d-dimensional sequence is x_n = (alpha0 + n * alpha) mod 1 with
/// alpha_k = 1 / phi_d^k, where phi_d is the real root > 1 of
/// x^(d+1) = x + 1. Every coordinate is held as a 64-bit fixed-point
/// fraction (numerator over 2^64), so n * alpha mod 1 is an exact wrapping
/// integer multiply and the sequence stays exact for any 64-bit index.
namespace qsep {

inline constexpr int kMaxSequenceDimension = 64;

struct PhiRoot {
  int dimension = 1;
  double value = 0.0;
};

namespace detail {

using WideFloat = boost::multiprecision::cpp_bin_float_50;

inline void check_sequence_dimension(int d) {
  if (d < 1 || d > kMaxSequenceDimension) {
    throw std::domain_error("sequence dimension must lie in [1, 64], got " +
                            std::to_string(d));
  }
}

// Bisection on [1, 2] in double, then Newton in 50-digit arithmetic.
inline WideFloat solve_phi_wide(int d) {
  check_sequence_dimension(d);
  auto residual = [d](double x) { return std::pow(x, d + 1) - x - 1.0; };
  double lo = 1.0;
  double hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? hi : lo) = mid;
  }
  WideFloat x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const WideFloat xd = boost::multiprecision::pow(x, d);
    const WideFloat f = xd * x - x - 1;
    const WideFloat df = (d + 1) * xd - 1;
    x -= f / df;
  }
  return x;
}

// Nearest 64-bit fixed-point fraction of a value in [0, 1).
inline std::uint64_t to_fixed(const WideFloat& frac) {
  const WideFloat scaled = boost::multiprecision::ldexp(frac, 64);
  const WideFloat rounded = boost::multiprecision::round(scaled);
  if (rounded >= boost::multiprecision::ldexp(WideFloat(1), 64)) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return rounded.convert_to<std::uint64_t>();
}

}  // namespace detail

/// Real root > 1 of x^(d+1) = x + 1, for 1 <= d <= 64.
inline PhiRoot solve_phi(int d) {
  return PhiRoot{d, detail::solve_phi_wide(d).convert_to<double>()};
}

/// Converts a fixed-point fraction to a double in [0, 1). The top 53 bits are
/// kept so the result is exact and never rounds up to 1.
inline double fixed_to_unit(std::uint64_t v) {
  return static_cast<double>(v >> 11) * 0x1.0p-53;
}

/// Fixed-point fraction nearest to x; x is reduced mod 1 first.
inline std::uint64_t unit_to_fixed(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("alpha0 must be finite");
  }
  x -= std::floor(x);
  const long double scaled = std::nearbyint(std::ldexp(static_cast<long double>(x), 64));
  if (scaled >= 18446744073709551616.0L) {
    return 0;  // rounds up to 1 == 0 mod 1
  }
  return static_cast<std::uint64_t>(scaled);
}

/// Fixed-point components frac(1/phi_d^k), k = 1..Dim.
template <std::size_t Dim>
struct AlphaVector {
  static_assert(Dim >= 1 && Dim <= kMaxSequenceDimension);
  std::array<std::uint64_t, Dim> components{};

  static AlphaVector golden() {
    const detail::WideFloat phi = detail::solve_phi_wide(static_cast<int>(Dim));
    AlphaVector out;
    detail::WideFloat power = 1;
    for (std::size_t k = 0; k < Dim; ++k) {
      power /= phi;
      const detail::WideFloat frac = power - boost::multiprecision::floor(power);
      out.components[k] = detail::to_fixed(frac);
    }
    return out;
  }

  double value(std::size_t k) const { return fixed_to_unit(components[k]); }
};

template <std::size_t Dim>
using Point = std::array<double, Dim>;

/// Quasirandom stream (alpha0 + n * alpha) mod 1 over [0,1)^Dim.
///
/// point(n) is a pure function of (alpha0, alpha, n). The cursor only serves
/// incremental stepping via next(), which reproduces point(n) bit for bit.
template <std::size_t Dim>
class QuasirandomStream {
 public:
  static constexpr std::size_t dimension = Dim;

  explicit QuasirandomStream(double alpha0 = 0.5)
      : QuasirandomStream(AlphaVector<Dim>::golden(), unit_to_fixed(alpha0)) {}

  QuasirandomStream(const AlphaVector<Dim>& alpha, std::uint64_t alpha0_fixed)
      : alpha_(alpha), alpha0_(alpha0_fixed) {
    state_.fill(alpha0_);
  }

  const AlphaVector<Dim>& alpha() const { return alpha_; }
  std::uint64_t alpha0_fixed() const { return alpha0_; }
  double alpha0() const { return fixed_to_unit(alpha0_); }
  std::uint64_t cursor() const { return cursor_; }

  std::array<std::uint64_t, Dim> point_fixed(std::uint64_t n) const {
    std::array<std::uint64_t, Dim> out;
    for (std::size_t k = 0; k < Dim; ++k) {
      out[k] = alpha0_ + n * alpha_.components[k];  // wraps mod 2^64
    }
    return out;
  }

  Point<Dim> point(std::uint64_t n) const {
    return to_unit(point_fixed(n));
  }

  /// Moves the cursor to n without generating intermediate points.
  void seek(std::uint64_t n) {
    cursor_ = n;
    state_ = point_fixed(n);
  }

  /// Returns point(cursor) and advances the cursor by one.
  Point<Dim> next() {
    const Point<Dim> out = to_unit(state_);
    for (std::size_t k = 0; k < Dim; ++k) {
      state_[k] += alpha_.components[k];
    }
    ++cursor_;
    return out;
  }

  const std::array<std::uint64_t, Dim>& state_fixed() const { return state_; }

  /// Rows point(start), ..., point(start + count - 1).
  std::vector<Point<Dim>> fill_block(std::uint64_t start, std::uint64_t count) const {
    if (count == 0) {
      throw std::domain_error("fill_block requires count >= 1");
    }
    if (count - 1 > std::numeric_limits<std::uint64_t>::max() - start) {
      throw std::domain_error("fill_block index range exceeds 2^64");
    }
    std::vector<Point<Dim>> rows;
    rows.reserve(count);
    QuasirandomStream walker(alpha_, alpha0_);
    walker.seek(start);
    for (std::uint64_t j = 0; j < count; ++j) {
      rows.push_back(walker.next());
    }
    return rows;
  }

 private:
  static Point<Dim> to_unit(const std::array<std::uint64_t, Dim>& v) {
    Point<Dim> out;
    for (std::size_t k = 0; k < Dim; ++k) {
      out[k] = fixed_to_unit(v[k]);
    }
    return out;
  }

  AlphaVector<Dim> alpha_;
  std::uint64_t alpha0_ = 0;
  std::uint64_t cursor_ = 0;
  std::array<std::uint64_t, Dim> state_{};
};

}  // namespace qsep
