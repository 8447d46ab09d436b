// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "quantsel/errors.hpp"

namespace quantsel::internal {

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kLogDetJitter = 1e-12;

// Eigenvalues of a Hermitian matrix, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian eigenvalue decomposition failed");
  }
  return solver.eigenvalues();
}

// tr(G^{-1}) for a Hermitian positive definite Gram matrix. Throws
// IllConditionedError on a nonpositive eigenvalue or a condition number
// beyond kConditionLimit.
inline double checked_inverse_trace(const Eigen::MatrixXcd& gram) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(gram);
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(lo > 0.0) || hi > kConditionLimit * lo) {
    throw IllConditionedError("Gram matrix condition number exceeds 1e12");
  }
  return ev.cwiseInverse().sum();
}

// log2 |M| for a Hermitian positive definite M via Cholesky, with one jitter
// retry on a rounding-induced indefiniteness.
inline double logdet2_hermitian(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) {
    Eigen::MatrixXcd jittered = m;
    jittered.diagonal().array() += kLogDetJitter;
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("Cholesky factorization failed after jitter");
    }
  }
  double sum = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    sum += std::log2(l(i, i).real());
  }
  return 2.0 * sum;
}

}  // namespace quantsel::internal
