// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jointopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace jointopt {

namespace {

// Multiplies the column by the conjugate phase of its largest-magnitude entry
// (first one on exact magnitude ties).
void canonicalize_phase(Eigen::Ref<CVector> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best * (1.0 + 1e-12)) {
      best = mag;
      arg = i;
    }
  }
  if (best > 0.0) v *= std::conj(v(arg)) / best;
}

// True when a should precede b among equal eigenvalues.
bool lexicographically_greater(const CVector& a, const CVector& b) {
  constexpr double tol = 1e-12;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > tol) return a(i).real() > b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > tol) return a(i).imag() > b(i).imag();
  }
  return false;
}

}  // namespace

CMatrix symmetrize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

bool is_hermitian(const CMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(m.norm(), 1e-300);
  return (m - m.adjoint()).norm() <= rel_tol * scale;
}

double frobenius_rel_error(const CMatrix& a, const CMatrix& b) {
  const double nb = b.norm();
  const double diff = (a - b).norm();
  return nb > 0.0 ? diff / nb : diff;
}

Evd sorted_evd(const CMatrix& m, EigenOrder order) {
  if (m.rows() != m.cols()) throw DimensionError("sorted_evd: matrix is not square");
  if (!is_hermitian(m)) throw DomainError("sorted_evd: matrix is not Hermitian");

  const Eigen::Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrize(m));
  if (solver.info() != Eigen::Success) throw NumericError("sorted_evd: eigen-solver failed");

  CMatrix vecs = solver.eigenvectors();
  const RVector& vals = solver.eigenvalues();
  for (Eigen::Index k = 0; k < n; ++k) canonicalize_phase(vecs.col(k));

  const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const bool descending = order == EigenOrder::Descending;
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(vals(a) - vals(b)) > 1e-12 * scale) {
      return descending ? vals(a) > vals(b) : vals(a) < vals(b);
    }
    return lexicographically_greater(vecs.col(a), vecs.col(b));
  });

  Evd out{CMatrix(n, n), RVector(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.vectors.col(k) = vecs.col(idx[static_cast<std::size_t>(k)]);
    out.values(k) = vals(idx[static_cast<std::size_t>(k)]);
  }
  return out;
}

CMatrix hermitian_sqrt(const CMatrix& m) {
  const Evd evd = sorted_evd(m);
  const double top = std::max(evd.values.maxCoeff(), 0.0);
  RVector root(evd.values.size());
  for (Eigen::Index i = 0; i < root.size(); ++i) {
    const double v = evd.values(i);
    if (v < -1e-12 * top || (top == 0.0 && v < 0.0)) {
      throw DomainError("hermitian_sqrt: matrix is indefinite");
    }
    root(i) = std::sqrt(std::max(v, 0.0));
  }
  return symmetrize(evd.vectors * root.asDiagonal() * evd.vectors.adjoint());
}

CMatrix hermitian_inv_sqrt(const CMatrix& m) {
  const Evd evd = sorted_evd(m);
  if (evd.values.minCoeff() <= 0.0) throw DomainError("hermitian_inv_sqrt: matrix is not positive definite");
  const RVector inv_root = evd.values.cwiseSqrt().cwiseInverse();
  return symmetrize(evd.vectors * inv_root.asDiagonal() * evd.vectors.adjoint());
}

CMatrix dft_unitary(int n) {
  if (n < 1) throw DomainError("dft_unitary: n must be positive");
  CMatrix u(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      // Reduce k*l mod n first so large products keep full phase accuracy.
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / n;
      u(k, l) = std::polar(norm, phase);
    }
  }
  return u;
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrize(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b, double max_condition) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) throw DimensionError("solve_hpd: shape mismatch");
  if (a.rows() == 0) return CMatrix(0, b.cols());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrize(a), Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (lo <= 0.0) throw DomainError("solve_hpd: matrix is not positive definite");
  if (hi / lo > max_condition) throw NumericError("solve_hpd: condition number exceeds limit");
  Eigen::LDLT<CMatrix> ldlt(symmetrize(a));
  return ldlt.solve(b);
}

}  // namespace jointopt
