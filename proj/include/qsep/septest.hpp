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

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qsep/statespace.hpp"

namespace qsep {

struct SepFlags {
  bool separable = false;
  bool absolutely_separable = false;
};

enum class PptMode {
  Determinant,
  Eigenvalues,
};

inline constexpr double kHermitianTolerance = 1e-8;

/// Partial transpose on the second qubit: each 2x2 block is transposed.
inline Matrix4c partial_transpose_b(const Matrix4c& rho) {
  Matrix4c out;
  for (int a = 0; a < 2; ++a) {
    for (int ap = 0; ap < 2; ++ap) {
      for (int b = 0; b < 2; ++b) {
        for (int bp = 0; bp < 2; ++bp) {
          out(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
        }
      }
    }
  }
  return out;
}

inline double hermitian_defect(const Matrix4c& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// det(rho^PT) as a real number (rho^PT is Hermitian).
inline double pt_determinant(const Matrix4c& rho) {
  return partial_transpose_b(rho).determinant().real();
}

inline double pt_min_eigenvalue(const Matrix4c& rho) {
  const Eigen::SelfAdjointEigenSolver<Matrix4c> solver(partial_transpose_b(rho),
                                                       Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Peres-Horodecki test for two qubits. At most one eigenvalue of rho^PT can
/// be negative, so det(rho^PT) >= 0 decides it; determinants within rounding
/// of zero (relative to the Hadamard bound of rho^PT) count as separable.
inline bool ppt_separable(const Matrix4c& rho, PptMode mode = PptMode::Determinant) {
  if (hermitian_defect(rho) > kHermitianTolerance) {
    throw std::domain_error("ppt_separable: input is not Hermitian");
  }
  const Matrix4c pt = partial_transpose_b(rho);
  if (mode == PptMode::Eigenvalues) {
    const Eigen::SelfAdjointEigenSolver<Matrix4c> solver(pt, Eigen::EigenvaluesOnly);
    const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    return solver.eigenvalues().minCoeff() >=
           -16.0 * std::numeric_limits<double>::epsilon() * scale;
  }
  double hadamard = 1.0;
  for (int r = 0; r < 4; ++r) hadamard *= pt.row(r).norm();
  return pt.determinant().real() >= -64.0 * std::numeric_limits<double>::epsilon() * hadamard;
}

/// Spectral condition l1 <= l3 + 2 sqrt(l2 l4) on the descending spectrum:
/// every state with this spectrum is separable.
inline bool absolutely_separable(const Spectrum& spectrum) {
  const auto& l = spectrum.sorted_descending().lambda;
  return l[0] <= l[2] + 2.0 * std::sqrt(l[1] * l[3]);
}

inline SepFlags classify(const Matrix4c& rho, const Spectrum& spectrum) {
  return {ppt_separable(rho), absolutely_separable(spectrum)};
}

}  // namespace qsep
