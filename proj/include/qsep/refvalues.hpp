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
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qsep/measures.hpp"
#include "qsep/quadrature.hpp"
#include "qsep/septest.hpp"

/// Deterministic reference values: separability functions, the exponent
/// family of two-dimensional conjecture integrals, and eigenvalue-simplex
/// quadratures for absolute separability and one-qubit volumes.
namespace qsep {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Dilogarithm

/// Li2(z) = sum_k z^k / k^2 for real z <= 1.
inline double li2(double z) {
  if (!(z <= 1.0)) throw std::domain_error("li2 requires z <= 1");
  constexpr double kZeta2 = kPi * kPi / 6.0;
  if (z == 1.0) return kZeta2;
  if (z < -1.0) {
    const double l = std::log(-z);
    return -kZeta2 - 0.5 * l * l - li2(1.0 / z);
  }
  if (z < -0.5) {
    const double l = std::log1p(-z);
    return -li2(z / (z - 1.0)) - 0.5 * l * l;
  }
  if (z > 0.5) {
    return kZeta2 - std::log(z) * std::log1p(-z) - li2(1.0 - z);
  }
  double sum = 0.0;
  double power = z;
  for (int k = 1; k < 200; ++k) {
    const double term = power / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= z;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Separability functions of the singular-value ratio eps in [0, 1]

namespace detail {

inline void check_unit_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::domain_error("separability functions require 0 <= eps <= 1");
  }
}

// Taylor coefficients of the d = 1 integrand g(s) around s = 0.
inline constexpr std::array<double, 6> kChi1IntegrandSeries = {
    8.0 / 3, -8.0 / 15, -8.0 / 105, -8.0 / 315, -8.0 / 693, -8.0 / 1287};

inline constexpr double kChi1SeriesCutoff = 1e-2;

}  // namespace detail

/// Closed (dilogarithm) form of the d = 1 separability function.
inline double chi1(double eps) {
  detail::check_unit_eps(eps);
  if (eps == 1.0) return 1.0;
  if (eps < detail::kChi1SeriesCutoff) {
    // Termwise integral of the integrand series.
    const double e2 = eps * eps;
    double acc = 0.0;
    double power = eps;
    for (std::size_t k = 0; k < detail::kChi1IntegrandSeries.size(); ++k) {
      acc += detail::kChi1IntegrandSeries[k] * power / static_cast<double>(2 * k + 1);
      power *= e2;
    }
    return 4.0 / (kPi * kPi) * acc;
  }
  const double e2 = eps * eps;
  const double at = std::atanh(eps);
  const double num = e2 * (4.0 * li2(eps) - li2(e2)) + (1.0 - e2 * e2) * at + eps * (e2 - 1.0);
  return 2.0 * num / (kPi * kPi * e2);
}

/// Integrand of the integral form of chi1.
inline double chi1_integrand(double s) {
  if (s < 0.05) {
    const double s2 = s * s;
    double acc = 0.0;
    for (auto it = detail::kChi1IntegrandSeries.rbegin(); it != detail::kChi1IntegrandSeries.rend();
         ++it) {
      acc = acc * s2 + *it;
    }
    return acc;
  }
  const double one_minus = 1.0 - s * s;
  return (s + 1.0 / s - one_minus * one_minus * std::atanh(s) / (s * s)) / s;
}

/// chi1(eps) from its defining integral (4/pi^2) int_0^eps g(s) ds.
inline double chi1_integral(double eps, quad::Result* info = nullptr) {
  detail::check_unit_eps(eps);
  if (eps == 0.0) return 0.0;
  const quad::Result r =
      quad::integrate(chi1_integrand, 0.0, eps, {.abs_tol = 1e-14, .rel_tol = 1e-12});
  if (info) *info = r;
  return 4.0 / (kPi * kPi) * r.value;
}

/// Regularized 3F2 series form, valid for any real Dyson index d > 0:
/// eps^d Gamma(d+1)^3 3F2~(-d/2, d/2, d; d/2+1, 3d/2+1; eps^2) / Gamma(d/2+1)^2.
inline double sep_function_series(double d, double eps, int* terms_used = nullptr) {
  detail::check_unit_eps(eps);
  if (!(d > 0.0)) throw std::domain_error("Dyson index must be positive");
  if (eps == 0.0) return 0.0;
  const double a1 = -0.5 * d;
  const double a2 = 0.5 * d;
  const double a3 = d;
  const double b1 = 0.5 * d + 1.0;
  const double b2 = 1.5 * d + 1.0;
  const double z = eps * eps;
  const double log_prefactor = 3.0 * std::lgamma(d + 1.0) - 2.0 * std::lgamma(0.5 * d + 1.0) -
                               std::lgamma(b1) - std::lgamma(b2);
  constexpr int kMaxTerms = 100000;
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  int k = 0;
  for (; k < kMaxTerms; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a1 + kk) * (a2 + kk) * (a3 + kk) / ((b1 + kk) * (b2 + kk) * (kk + 1.0)) * z;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (term == 0.0 || std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  if (k == kMaxTerms) {
    throw std::runtime_error("3F2 series failed to converge");
  }
  if (terms_used) *terms_used = k + 1;
  return std::pow(eps, d) * std::exp(log_prefactor) * sum;
}

/// Separability function for Dyson index d: the closed forms at d = 1, 2, 4,
/// the 3F2 series otherwise.
inline double sep_function(int d, double eps) {
  detail::check_unit_eps(eps);
  switch (d) {
    case 1:
      return chi1(eps);
    case 2:
      return eps * eps * (4.0 - eps * eps) / 3.0;
    case 4: {
      const double e2 = eps * eps;
      return e2 * e2 * (15.0 * e2 * e2 - 64.0 * e2 + 84.0) / 35.0;
    }
    default:
      return sep_function_series(static_cast<double>(d), eps);
  }
}

/// Induced-measure (k = 1) two-qubit separability function.
inline double chi21(double eps) {
  detail::check_unit_eps(eps);
  const double e2 = eps * eps;
  const double u = 3.0 - e2;
  return 0.25 * e2 * u * u;
}

// ---------------------------------------------------------------------------
// Two-dimensional conjecture integrals over -1 <= y <= x <= 1

enum class ExponentFamily {
  HilbertSchmidt,  // (1 - x^2)^d
  SqrtX,           // (1 - x^2)^(-d/4)
  Alternative,     // (1 - x^2)^((d-2)/4)
};

inline std::string to_string(ExponentFamily f) {
  switch (f) {
    case ExponentFamily::HilbertSchmidt: return "hs";
    case ExponentFamily::SqrtX: return "sqrtx";
    case ExponentFamily::Alternative: return "alt";
  }
  return "?";
}

inline double family_exponent(int d, ExponentFamily f) {
  switch (f) {
    case ExponentFamily::HilbertSchmidt: return d;
    case ExponentFamily::SqrtX: return -0.25 * d;
    case ExponentFamily::Alternative: return 0.25 * (d - 2);
  }
  return 0.0;
}

struct SepProbQuadrature {
  int d = 2;
  ExponentFamily family = ExponentFamily::HilbertSchmidt;
  double numerator = 0.0;
  std::optional<double> denominator;  // nullopt: the integral diverges
  std::optional<double> ratio;
  bool converged = true;
  std::vector<double> truncated_denominators;  // divergence probe, if run

  bool denominator_infinite() const { return !denominator.has_value(); }
};

namespace detail {

// Outer variable theta, inner phi, with x = sin(theta), y = sin(phi):
//   int_{-pi/2}^{pi/2} dtheta int_{-pi/2}^{theta} dphi
//     cos^q(theta) cos^q(phi) (sin theta - sin phi)^d S(eps),  q = 2p + 1,
// and eps = tan(pi/4 - theta/2) / tan(pi/4 - phi/2).
struct ConjectureIntegrand {
  int d;
  double q;
  bool with_sep_function;

  double operator()(double theta, double phi) const {
    const double diff = 2.0 * std::cos(0.5 * (theta + phi)) * std::sin(0.5 * (theta - phi));
    double v = std::pow(std::cos(theta) * std::cos(phi), q) * std::pow(diff, d);
    if (with_sep_function) {
      const double eps = std::tan(0.25 * kPi - 0.5 * theta) / std::tan(0.25 * kPi - 0.5 * phi);
      v *= sep_function(d, std::clamp(eps, 0.0, 1.0));
    }
    return v;
  }
};

inline quad::Result conjecture_integral(const ConjectureIntegrand& g, double lo, double hi,
                                        const quad::Options& opts) {
  bool inner_ok = true;
  std::size_t inner_evals = 0;
  auto outer = [&](double theta) {
    const quad::Result r =
        quad::integrate([&](double phi) { return g(theta, phi); }, lo, theta,
                        {.abs_tol = 0.01 * opts.abs_tol, .rel_tol = 0.1 * opts.rel_tol});
    inner_ok = inner_ok && r.converged;
    inner_evals += r.evaluations;
    return r.value;
  };
  quad::Result r = quad::integrate(outer, lo, hi, opts);
  r.converged = r.converged && inner_ok;
  r.evaluations += inner_evals;
  return r;
}

}  // namespace detail

/// Numerator, denominator and ratio of the conjecture integral for Dyson
/// index d in {1, 2, 4} and the given exponent family. When the endpoint
/// power makes the denominator non-integrable, the denominator is evaluated
/// on shrinking truncations [-pi/2 + delta, pi/2 - delta] and reported as
/// infinite if it keeps growing.
inline SepProbQuadrature sep_prob_quadrature(int d, ExponentFamily family) {
  if (d != 1 && d != 2 && d != 4) {
    throw std::domain_error("sep_prob_quadrature supports d in {1, 2, 4}");
  }
  const double p = family_exponent(d, family);
  const double q = 2.0 * p + 1.0;
  const quad::Options opts{.abs_tol = 1e-14, .rel_tol = 1e-12, .max_intervals = 4000};
  SepProbQuadrature out;
  out.d = d;
  out.family = family;
  const double half_pi = 0.5 * kPi;

  const quad::Result num =
      detail::conjecture_integral({d, q, true}, -half_pi, half_pi, opts);
  out.numerator = num.value;
  out.converged = num.converged;

  if (q <= -1.0) {
    // cos^q is not integrable at the endpoints; probe growth under truncation.
    for (int k = 2; k <= 7; ++k) {
      const double delta = std::pow(10.0, -k);
      const quad::Result r = detail::conjecture_integral({d, q, false}, -half_pi + delta,
                                                         half_pi - delta, opts);
      out.truncated_denominators.push_back(r.value);
    }
    const auto& t = out.truncated_denominators;
    const double early = t[1] - t[0];
    const double late = t[5] - t[4];
    if (late > 0.5 * early) {
      out.denominator.reset();
      out.ratio.reset();
      return out;
    }
  }
  const quad::Result den =
      detail::conjecture_integral({d, q, false}, -half_pi, half_pi, opts);
  out.converged = out.converged && den.converged;
  out.denominator = den.value;
  out.ratio = num.value / den.value;
  return out;
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt absolute separability constant

namespace detail {
using HighPrecision = boost::multiprecision::cpp_bin_float_50;
}

/// 29902415923/497664 + (-3217542976 + 5120883075 pi
///   - 16386825840 atan(sqrt 2)) / (32768 sqrt 2), in 50-digit arithmetic.
inline double hs_abs_constant() {
  using R = detail::HighPrecision;
  const R pi = boost::math::constants::pi<R>();
  const R r2 = boost::multiprecision::sqrt(R(2));
  const R v = R(29902415923) / 497664 +
              (R(-3217542976) + R(5120883075) * pi - R(16386825840) * boost::multiprecision::atan(r2)) /
                  (R(32768) * r2);
  return v.convert_to<double>();
}

/// The same constant in its second arrangement,
/// [32 (29902415923 - 24433216974 sqrt 2) + 248874917445 sqrt 2 (5 pi
///   - 16 atan(sqrt 2))] / (2^16 3^5).
inline double hs_abs_constant_alt_form() {
  using R = detail::HighPrecision;
  const R pi = boost::math::constants::pi<R>();
  const R r2 = boost::multiprecision::sqrt(R(2));
  const R v = (R(32) * (R(29902415923) - R(24433216974) * r2) +
               R(248874917445) * r2 * (5 * pi - 16 * boost::multiprecision::atan(r2))) /
              (R(65536) * 243);
  return v.convert_to<double>();
}

// ---------------------------------------------------------------------------
// Absolute separability over the eigenvalue simplex

struct AbsSepQuadrature {
  MeasureKind kind;
  std::optional<double> probability;  // nullopt: divergent denominator
  double numerator = 0.0;
  double denominator = 0.0;
  bool converged = true;
};

namespace detail {

inline constexpr double kAbsSepAbsTol = 1e-10;  // times the coarse denominator
inline constexpr double kAbsSepRelTol = 1e-8;

// Ordered simplex l1 >= l2 >= l3 >= l4 >= 0 with l4 = u^2 outermost, l2 in
// the middle and l3 innermost. Every constraint is linear in l3, including the
// absolute-separability boundary l3 >= (1 - (sqrt l2 + sqrt l4)^2) / 2.
inline quad::Result ordered_simplex_integral(const MeasureKind& kind, bool absolutely_separable_only,
                                             const quad::Options& opts) {
  auto weight = [&kind](double l2, double l3, double l4) {
    const Spectrum s{{1.0 - l2 - l3 - l4, l2, l3, l4}};
    const LogWeight w = eig_weight_log(kind, s);
    return w.finite ? std::exp(w.log_value) : 0.0;
  };
  auto lower = [&](double l2, double l4) {
    if (!absolutely_separable_only) return l4;
    const double r = std::sqrt(l2) + std::sqrt(l4);
    return std::max(l4, 0.5 * (1.0 - r * r));
  };
  auto upper = [](double l2, double l4) { return std::min(l2, 1.0 - 2.0 * l2 - l4); };

  bool ok = true;
  std::size_t evals = 0;
  const quad::Options inner_opts{.abs_tol = 0.01 * opts.abs_tol, .rel_tol = 0.01 * opts.rel_tol,
                                 .max_intervals = opts.max_intervals};
  const quad::Options middle_opts{.abs_tol = 0.1 * opts.abs_tol, .rel_tol = 0.1 * opts.rel_tol,
                                  .max_intervals = opts.max_intervals};
  auto middle = [&](double l4) {
    const double lo2 = l4;
    const double hi2 = 0.5 * (1.0 - 2.0 * l4);
    if (!(hi2 > lo2)) return 0.0;
    const double t = std::sqrt(l4);
    const double root = std::sqrt(std::max(0.0, 3.0 - 2.0 * t * t));
    const double sa = std::sqrt(std::max(0.0, 1.0 - 2.0 * l4)) - t;
    const double s1 = (-t + root) / 3.0;
    const double s2 = (t + root) / 3.0;
    std::vector<double> cuts = {lo2, hi2, (1.0 - l4) / 3.0};
    if (absolutely_separable_only) {
      for (double s : {sa, s1, s2}) {
        if (s > 0.0) cuts.push_back(s * s);
      }
    }
    std::erase_if(cuts, [&](double c) { return c < lo2 || c > hi2; });
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      if (!(b > a)) continue;
      const double m = 0.5 * (a + b);
      if (!(upper(m, l4) > lower(m, l4))) continue;
      const quad::Result r = quad::integrate(
          [&](double l2) {
            const double lo3 = lower(l2, l4);
            const double hi3 = upper(l2, l4);
            if (!(hi3 > lo3)) return 0.0;
            const quad::Result in =
                quad::integrate([&](double l3) { return weight(l2, l3, l4); }, lo3, hi3, inner_opts);
            ok = ok && in.converged;
            evals += in.evaluations;
            return in.value;
          },
          a, b, middle_opts);
      ok = ok && r.converged;
      total += r.value;
    }
    return total;
  };
  quad::Result r = quad::integrate([&](double u) { return 2.0 * u * middle(u * u); }, 0.0, 0.5, opts);
  r.converged = r.converged && ok;
  r.evaluations += evals;
  return r;
}

}  // namespace detail

/// Fraction of the measure's eigenvalue density on the absolutely separable
/// spectra. The coset factor cancels because the indicator depends on the
/// spectrum only; the ordered-simplex integrals stand for all 24 orderings.
inline AbsSepQuadrature abs_sep_quadrature(const MeasureKind& kind) {
  AbsSepQuadrature out;
  out.kind = kind;
  if (!kind.has_finite_volume()) {
    out.converged = true;
    return out;
  }
  // Coarse pass to set an absolute scale for the tolerances.
  const quad::Result coarse = detail::ordered_simplex_integral(
      kind, false, {.abs_tol = 0.0, .rel_tol = 1e-4, .max_intervals = 200});
  const double scale = std::abs(coarse.value);
  const quad::Options opts{.abs_tol = detail::kAbsSepAbsTol * scale,
                           .rel_tol = detail::kAbsSepRelTol,
                           .max_intervals = 2000};
  const quad::Result den = detail::ordered_simplex_integral(kind, false, opts);
  const quad::Result num = detail::ordered_simplex_integral(kind, true, opts);
  out.numerator = 24.0 * num.value;
  out.denominator = 24.0 * den.value;
  out.probability = num.value / den.value;
  out.converged = num.converged && den.converged;
  return out;
}

// ---------------------------------------------------------------------------
// One-qubit volumes

struct QubitVolume {
  std::optional<double> value;  // nullopt: infinite
  bool converged = true;
};

/// int_0^1 w(lambda) d lambda for the one-qubit eigenvalue density, using
/// lambda = sin^2(theta) on the half lambda <= 1/2 and symmetry.
inline QubitVolume qubit_volume(const MeasureKind& kind) {
  detail::require_monotone(kind);
  if (!kind.has_finite_volume()) return {std::nullopt, true};
  auto g = [&kind](double theta) {
    const double s = std::sin(theta);
    const LogWeight w = qubit_eig_weight_log(kind, s * s);
    return w.finite ? std::exp(w.log_value) * std::sin(2.0 * theta) : 0.0;
  };
  const quad::Result r =
      quad::integrate(g, 0.0, 0.25 * kPi, {.abs_tol = 1e-15, .rel_tol = 1e-13, .max_intervals = 4000});
  return {2.0 * r.value, r.converged};
}

struct VolumeRatio {
  std::optional<double> ratio;  // nullopt: a divergent volume is involved
  bool converged = true;
};

inline VolumeRatio qubit_volume_ratio(const MeasureKind& a, const MeasureKind& b) {
  const QubitVolume va = qubit_volume(a);
  const QubitVolume vb = qubit_volume(b);
  if (!va.value || !vb.value) return {std::nullopt, va.converged && vb.converged};
  return {*va.value / *vb.value, va.converged && vb.converged};
}

}  // namespace qsep
