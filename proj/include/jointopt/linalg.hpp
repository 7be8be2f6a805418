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

// Ordered Hermitian decompositions and small dense helpers shared by every
// module. All matrices are dense column-major complex; dimensions stay small
// (<= 64) so nothing here bothers with structured or sparse paths.

#pragma once

#include "jointopt/types.hpp"

namespace jointopt {

enum class EigenOrder { Descending, Ascending };

struct Evd {
  CMatrix vectors;  // unitary, column k pairs with values[k]
  RVector values;
};

/// Hermitian eigen-decomposition with eigenvalues sorted (descending by
/// default). Eigenvector phases are canonicalized so the largest-magnitude
/// component is real-positive; ties (within 1e-12 relative) are broken by the
/// lexicographically larger canonical eigenvector first, which makes the
/// output deterministic and returns identity for identity input.
///
/// Throws DomainError when `m` is not Hermitian within 1e-10 relative.
Evd sorted_evd(const CMatrix& m, EigenOrder order = EigenOrder::Descending);

/// Hermitian PSD square root. Eigenvalues down to -1e-12 * max are clamped to
/// zero; anything more negative is a DomainError.
CMatrix hermitian_sqrt(const CMatrix& m);

/// Inverse Hermitian square root of a positive definite matrix.
CMatrix hermitian_inv_sqrt(const CMatrix& m);

/// Unitary DFT, entry (k, l) = exp(-2 pi i k l / n) / sqrt(n).
CMatrix dft_unitary(int n);

/// (m + m^H) / 2.
CMatrix symmetrize(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double rel_tol = 1e-10);

/// ||a - b||_F / max(||b||_F, tiny). Returns ||a||_F when b is zero.
double frobenius_rel_error(const CMatrix& a, const CMatrix& b);

/// Solves A Z = B for Hermitian positive definite A via LDL^T. Throws
/// NumericError when cond(A) exceeds `max_condition` and DomainError when A is
/// not positive definite.
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b, double max_condition = 1e12);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& m);

}  // namespace jointopt
