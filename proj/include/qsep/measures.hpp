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
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qsep/statespace.hpp"

namespace qsep {

enum class MeasureTag {
  HilbertSchmidt,
  Induced,
  Bures,
  Maximal,
  KuboMori,
  Geometric,
  WignerYanase,
  LogGeometric,
  ArithMinMax,
  MorozovaChentsov,
  Identric,
};

/// One of the eigenvalue measures. Monotone kinds carry a normalized
/// symmetric operator monotone f (f(1) = 1, f(x) = x f(1/x)); HilbertSchmidt
/// and Induced(k) are flat in the Vandermonde sense.
struct MeasureKind {
  MeasureTag tag = MeasureTag::HilbertSchmidt;
  int induced_k = 0;

  static constexpr MeasureKind hs() { return {MeasureTag::HilbertSchmidt, 0}; }
  static constexpr MeasureKind induced(int k) { return {MeasureTag::Induced, k}; }
  static constexpr MeasureKind of(MeasureTag t) { return {t, 0}; }

  constexpr bool is_monotone() const {
    return tag != MeasureTag::HilbertSchmidt && tag != MeasureTag::Induced;
  }

  /// False for the monotone kinds whose two-qubit (and one-qubit) state
  /// volume is infinite.
  constexpr bool has_finite_volume() const {
    return tag != MeasureTag::Maximal && tag != MeasureTag::Geometric &&
           tag != MeasureTag::LogGeometric;
  }

  friend constexpr bool operator==(const MeasureKind&, const MeasureKind&) = default;
};

/// The nine monotone kinds, in the order of the usual listing.
inline constexpr std::array<MeasureKind, 9> kMonotoneKinds = {
    MeasureKind::of(MeasureTag::Bures),        MeasureKind::of(MeasureTag::Maximal),
    MeasureKind::of(MeasureTag::KuboMori),     MeasureKind::of(MeasureTag::Geometric),
    MeasureKind::of(MeasureTag::WignerYanase), MeasureKind::of(MeasureTag::LogGeometric),
    MeasureKind::of(MeasureTag::ArithMinMax),  MeasureKind::of(MeasureTag::MorozovaChentsov),
    MeasureKind::of(MeasureTag::Identric),
};

inline std::string to_string(const MeasureKind& kind) {
  switch (kind.tag) {
    case MeasureTag::HilbertSchmidt: return "hs";
    case MeasureTag::Induced: return "induced:" + std::to_string(kind.induced_k);
    case MeasureTag::Bures: return "bures";
    case MeasureTag::Maximal: return "maximal";
    case MeasureTag::KuboMori: return "kubo-mori";
    case MeasureTag::Geometric: return "geometric";
    case MeasureTag::WignerYanase: return "wigner-yanase";
    case MeasureTag::LogGeometric: return "log-geometric";
    case MeasureTag::ArithMinMax: return "arith-minmax";
    case MeasureTag::MorozovaChentsov: return "morozova-chentsov";
    case MeasureTag::Identric: return "identric";
  }
  return "unknown";
}

/// Parses the CLI-facing names; nullopt for anything unrecognized.
inline std::optional<MeasureKind> parse_measure(std::string_view name) {
  constexpr std::string_view kInduced = "induced:";
  if (name.starts_with(kInduced)) {
    const std::string_view digits = name.substr(kInduced.size());
    int k = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || k < 0) {
      return std::nullopt;
    }
    return MeasureKind::induced(k);
  }
  if (name == "hs") return MeasureKind::hs();
  for (const MeasureKind& m : kMonotoneKinds) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

/// Log-domain weight. finite == false marks +inf or NaN (a divergent weight
/// that the estimator discards); a weight of exactly zero is finite with
/// log_value == -inf.
struct LogWeight {
  double log_value = -std::numeric_limits<double>::infinity();
  bool finite = true;

  static LogWeight of(double log_value) {
    return {log_value, !(std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity())};
  }
  static LogWeight zero() { return {-std::numeric_limits<double>::infinity(), true}; }
  static LogWeight divergent() { return {std::numeric_limits<double>::infinity(), false}; }

  LogWeight& operator+=(double log_factor) {
    *this = of(log_value + log_factor);
    return *this;
  }
};

namespace detail {

inline void require_monotone(const MeasureKind& kind) {
  if (!kind.is_monotone()) {
    throw std::domain_error("measure '" + to_string(kind) + "' has no operator monotone f");
  }
}

// Below this distance from x = 1 the removable singularities use Taylor series.
inline constexpr double kSeriesRadius = 1e-4;

inline double poly4(double t, double c1, double c2, double c3, double c4) {
  return 1.0 + t * (c1 + t * (c2 + t * (c3 + t * c4)));
}

}  // namespace detail

/// The operator monotone function of a monotone measure, for x > 0.
inline double f_eval(const MeasureKind& kind, double x) {
  detail::require_monotone(kind);
  if (!(x > 0.0)) {
    throw std::domain_error("f(x) requires x > 0");
  }
  const double t = x - 1.0;
  const bool near_one = std::abs(t) < detail::kSeriesRadius;
  switch (kind.tag) {
    case MeasureTag::Bures:
      return 0.5 * (x + 1.0);
    case MeasureTag::Maximal:
      return 2.0 * x / (x + 1.0);
    case MeasureTag::KuboMori:
      if (near_one) return detail::poly4(t, 1.0 / 2, -1.0 / 12, 1.0 / 24, -19.0 / 720);
      return t / std::log(x);
    case MeasureTag::Geometric:
      return std::sqrt(x);
    case MeasureTag::WignerYanase: {
      const double r = std::sqrt(x) + 1.0;
      return 0.25 * r * r;
    }
    case MeasureTag::LogGeometric:
      if (near_one) return detail::poly4(t, 1.0 / 2, -5.0 / 24, 5.0 / 48, -317.0 / 5760);
      return 2.0 * t * std::sqrt(x) / ((x + 1.0) * std::log(x));
    case MeasureTag::ArithMinMax:
      return (x * x + 6.0 * x + 1.0) / (4.0 * x + 4.0);
    case MeasureTag::MorozovaChentsov: {
      if (near_one) return detail::poly4(t, 1.0 / 2, -1.0 / 6, 1.0 / 12, -11.0 / 240);
      const double l = std::log(x);
      return 2.0 * t * t / ((x + 1.0) * l * l);
    }
    case MeasureTag::Identric:
      if (near_one) return detail::poly4(t, 1.0 / 2, -1.0 / 24, 1.0 / 48, -73.0 / 5760);
      return std::exp(x * std::log(x) / t - 1.0);
    case MeasureTag::HilbertSchmidt:
    case MeasureTag::Induced:
      break;
  }
  throw std::domain_error("unreachable measure tag");
}

/// log f(x); avoids the exp/log round trip for the identric mean.
inline double log_f(const MeasureKind& kind, double x) {
  if (kind.tag == MeasureTag::Identric && std::abs(x - 1.0) >= detail::kSeriesRadius && x > 0.0) {
    return x * std::log(x) / (x - 1.0) - 1.0;
  }
  return std::log(f_eval(kind, x));
}

/// Log of the eigenvalue density of a measure on 4x4 spectra.
///
/// Monotone kinds: prod_{i<j} (l_i - l_j)^2 * (l1 l2 l3 l4)^{-7/2} * l1^3 l2^2 l3
/// / prod_{i<j} f(l_i / l_j), with the spectrum sorted descending first.
/// HilbertSchmidt: prod_{i<j} (l_i - l_j)^2. Induced(k): that times det^k.
inline LogWeight eig_weight_log(const MeasureKind& kind, const Spectrum& spectrum) {
  const Spectrum s = spectrum.sorted_descending();
  const auto& l = s.lambda;
  double log_vdm = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      log_vdm += 2.0 * std::log(std::abs(l[i] - l[j]));
    }
  }
  if (kind.tag == MeasureTag::HilbertSchmidt) {
    return LogWeight::of(log_vdm);
  }
  if (kind.tag == MeasureTag::Induced) {
    if (kind.induced_k == 0) return LogWeight::of(log_vdm);
    double log_det = 0.0;
    for (double v : l) log_det += std::log(v);
    return LogWeight::of(log_vdm + kind.induced_k * log_det);
  }
  if (!(l[3] > 0.0)) {
    return LogWeight::divergent();
  }
  const std::array<double, 4> log_l = {std::log(l[0]), std::log(l[1]), std::log(l[2]),
                                       std::log(l[3])};
  double out = log_vdm - 3.5 * (log_l[0] + log_l[1] + log_l[2] + log_l[3]) +
               3.0 * log_l[0] + 2.0 * log_l[1] + log_l[2];
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      out -= log_f(kind, l[i] / l[j]);
    }
  }
  return LogWeight::of(out);
}

/// Log of the one-qubit eigenvalue density (l1 - l2)^2 / (sqrt(l1 l2) l2 f(l1/l2))
/// with l1 = lambda, l2 = 1 - lambda.
inline LogWeight qubit_eig_weight_log(const MeasureKind& kind, double lambda) {
  detail::require_monotone(kind);
  if (!(lambda > 0.0 && lambda < 1.0)) {
    return LogWeight::divergent();
  }
  const double hi = std::max(lambda, 1.0 - lambda);
  const double lo = std::min(lambda, 1.0 - lambda);
  const double log_num = 2.0 * std::log(hi - lo);
  return LogWeight::of(log_num - 0.5 * (std::log(hi) + std::log(lo)) - std::log(lo) -
                       log_f(kind, hi / lo));
}

}  // namespace qsep
