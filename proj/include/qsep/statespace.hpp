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
#include <complex>
#include <numbers>
#include <span>

#include <Eigen/Core>

/// Two-qubit density matrices from 15 unit-cube coordinates.
///
/// Twelve coordinates become Euler angles of the SU(4) coset SU(4)/T
/// (T = diagonal torus), three become a spectrum on the probability simplex,
/// and rho = U diag(lambda) U^dagger.
///
/// The unitary is the ordered product
///
///   U = e^{i l3 a1} e^{i l2 a2} e^{i l3 a3} e^{i l5 a4} e^{i l3 a5} e^{i l10 a6}
///       e^{i l3 a7} e^{i l2 a8} e^{i l3 a9} e^{i l5 a10} e^{i l3 a11} e^{i l2 a12}
///
/// in the SU(4) Gell-Mann basis: l3 = diag(1,-1,0,0); l2, l5, l10 are the
/// antisymmetric generators on basis pairs (1,2), (1,3), (1,4), so that
/// e^{i l a} is a real rotation by a in that plane. The trailing torus factors
/// (a13..a15) commute with diag(lambda) and are dropped.
///
/// Angle ranges: odd angles a1, a3, ..., a11 span [0, pi]; even angles
/// a2, a4, ..., a12 span [0, pi/2].
///
/// Coset volume density (checked against the numerical Jacobian of the map in
/// the tests):
///
///   sin(2 a2) sin(a4) cos^3(a4) sin^5(a6) cos(a6)
///     sin(2 a8) sin^3(a10) cos(a10) sin(2 a12)
namespace qsep {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;

inline constexpr std::size_t kAngleCount = 12;
inline constexpr std::size_t kUnitCoordinates = 15;

/// Range length of each Euler angle; angle k is u_k * range[k].
inline constexpr std::array<double, kAngleCount> kAngleRange = {
    std::numbers::pi, std::numbers::pi / 2, std::numbers::pi, std::numbers::pi / 2,
    std::numbers::pi, std::numbers::pi / 2, std::numbers::pi, std::numbers::pi / 2,
    std::numbers::pi, std::numbers::pi / 2, std::numbers::pi, std::numbers::pi / 2};

struct EulerAngles {
  std::array<double, kAngleCount> alpha{};

  /// 1-based accessor matching the conventional alpha_1..alpha_12 labels.
  double operator()(int k) const { return alpha[static_cast<std::size_t>(k - 1)]; }
};

struct Spectrum {
  std::array<double, 4> lambda{};

  double sum() const { return lambda[0] + lambda[1] + lambda[2] + lambda[3]; }
  double min() const { return *std::min_element(lambda.begin(), lambda.end()); }
  Spectrum sorted_descending() const {
    Spectrum s = *this;
    std::sort(s.lambda.begin(), s.lambda.end(), std::greater<>());
    return s;
  }
};

struct BlochRadii {
  double r_a = 0.0;
  double r_b = 0.0;
};

struct SampledState {
  Matrix4c rho;
  EulerAngles angles;
  Spectrum spectrum;
  double haar_weight = 0.0;
};

/// Sort-and-difference map from [0,1]^3 onto the 3-simplex.
inline Spectrum eigen_from_unit(std::span<const double, 3> u) {
  std::array<double, 3> v = {u[0], u[1], u[2]};
  std::sort(v.begin(), v.end());
  Spectrum s;
  s.lambda[0] = v[0];
  s.lambda[1] = v[1] - v[0];
  s.lambda[2] = v[2] - v[1];
  s.lambda[3] = 1.0 - v[2];
  return s;
}

inline EulerAngles angles_from_unit(std::span<const double, kAngleCount> u) {
  EulerAngles a;
  for (std::size_t k = 0; k < kAngleCount; ++k) {
    a.alpha[k] = u[k] * kAngleRange[k];
  }
  return a;
}

namespace detail {

struct SinCos {
  double s;
  double c;
};

inline std::array<SinCos, kAngleCount> sincos_all(const EulerAngles& a) {
  std::array<SinCos, kAngleCount> out;
  for (std::size_t k = 0; k < kAngleCount; ++k) {
    out[k] = {std::sin(a.alpha[k]), std::cos(a.alpha[k])};
  }
  return out;
}

inline double haar_from_sincos(const std::array<SinCos, kAngleCount>& t) {
  auto s = [&](int k) { return t[static_cast<std::size_t>(k - 1)].s; };
  auto c = [&](int k) { return t[static_cast<std::size_t>(k - 1)].c; };
  const double s6 = s(6);
  const double s10 = s(10);
  const double c4 = c(4);
  const double w = (2.0 * s(2) * c(2)) * s(4) * (c4 * c4 * c4) *
                   (s6 * s6 * s6 * s6 * s6) * c(6) * (2.0 * s(8) * c(8)) *
                   (s10 * s10 * s10) * c(10) * (2.0 * s(12) * c(12));
  return std::max(w, 0.0);
}

// Right-multiplies M by diag(e^{ia}, e^{-ia}, 1, 1).
inline void apply_l3(Matrix4c& m, const SinCos& t) {
  const Complex p(t.c, t.s);
  const Complex q(t.c, -t.s);
  m.col(0) *= p;
  m.col(1) *= q;
}

// Right-multiplies M by the real rotation e^{i l a} in the (0, k) plane.
inline void apply_rotation(Matrix4c& m, int k, const SinCos& t) {
  for (int r = 0; r < 4; ++r) {
    const Complex a = m(r, 0);
    const Complex b = m(r, k);
    m(r, 0) = t.c * a - t.s * b;
    m(r, k) = t.s * a + t.c * b;
  }
}

inline Matrix4c unitary_from_sincos(const std::array<SinCos, kAngleCount>& t) {
  // Generator per angle: 0 = l3 phase, otherwise rotation plane partner.
  static constexpr std::array<int, kAngleCount> kGenerator = {0, 1, 0, 2, 0, 3,
                                                              0, 1, 0, 2, 0, 1};
  Matrix4c m = Matrix4c::Identity();
  for (std::size_t k = 0; k < kAngleCount; ++k) {
    if (kGenerator[k] == 0) {
      apply_l3(m, t[k]);
    } else {
      apply_rotation(m, kGenerator[k], t[k]);
    }
  }
  return m;
}

inline Matrix4c conjugate_diagonal(const Matrix4c& u, const Spectrum& s) {
  Matrix4c rho;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < 4; ++k) {
        acc += s.lambda[static_cast<std::size_t>(k)] * u(i, k) * std::conj(u(j, k));
      }
      rho(i, j) = acc;
      rho(j, i) = std::conj(acc);
    }
    rho(i, i) = Complex(rho(i, i).real(), 0.0);
  }
  return rho;
}

}  // namespace detail

/// Coset volume density of the Euler angles; nonnegative on the ranges.
inline double haar_weight(const EulerAngles& angles) {
  return detail::haar_from_sincos(detail::sincos_all(angles));
}

inline Matrix4c euler_unitary(const EulerAngles& angles) {
  return detail::unitary_from_sincos(detail::sincos_all(angles));
}

/// rho = U(angles) diag(lambda) U(angles)^dagger.
inline Matrix4c density_matrix(const EulerAngles& angles, const Spectrum& spectrum) {
  return detail::conjugate_diagonal(euler_unitary(angles), spectrum);
}

inline SampledState assemble_state(std::span<const double, kUnitCoordinates> u) {
  SampledState out;
  out.angles = angles_from_unit(u.first<kAngleCount>());
  out.spectrum = eigen_from_unit(u.last<3>());
  const auto t = detail::sincos_all(out.angles);
  out.rho = detail::conjugate_diagonal(detail::unitary_from_sincos(t), out.spectrum);
  out.haar_weight = detail::haar_from_sincos(t);
  return out;
}

inline Matrix2c partial_trace_b(const Matrix4c& rho) {
  Matrix2c out;
  for (int a = 0; a < 2; ++a) {
    for (int ap = 0; ap < 2; ++ap) {
      out(a, ap) = rho(2 * a, 2 * ap) + rho(2 * a + 1, 2 * ap + 1);
    }
  }
  return out;
}

inline Matrix2c partial_trace_a(const Matrix4c& rho) {
  Matrix2c out;
  for (int b = 0; b < 2; ++b) {
    for (int bp = 0; bp < 2; ++bp) {
      out(b, bp) = rho(b, bp) + rho(2 + b, 2 + bp);
    }
  }
  return out;
}

/// Bloch radius sqrt(2 Tr(sigma^2) - 1) of a 2x2 state.
inline double bloch_radius(const Matrix2c& sigma) {
  const double purity = std::norm(sigma(0, 0)) + std::norm(sigma(1, 1)) +
                        std::norm(sigma(0, 1)) + std::norm(sigma(1, 0));
  const double arg = 2.0 * purity - 1.0;
  return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

/// Bloch radii of the first (A) and second (B) qubit reductions.
inline BlochRadii reduced_bloch_radii(const Matrix4c& rho) {
  return {bloch_radius(partial_trace_b(rho)), bloch_radius(partial_trace_a(rho))};
}

inline BlochRadii reduced_bloch_radii(const SampledState& state) {
  return reduced_bloch_radii(state.rho);
}

}  // namespace qsep
