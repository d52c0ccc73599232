// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra used by every other rislink module.
//
// Vectorization is column-major throughout: vec(X) stacks the columns of X,
// so that vec(A X B) = (B^T kron A) vec(X). The Kronecker constructions of
// the relay subproblems depend on this convention.

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace rislink::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;

struct HermitianEig {
  RealVector values;          // descending
  ComplexMatrix vectors;      // columns match `values`
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexVector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

// max |X - X^H| <= tol * (1 + max |X|)
bool is_hermitian(const ComplexMatrix& x, double tol = kHermitianTol);

// (X + X^H) / 2; throws std::invalid_argument when X is not square.
ComplexMatrix hermitian_part(const ComplexMatrix& x);

// Symmetrizes and decomposes. Rejects inputs that are not Hermitian within
// `tol` with std::invalid_argument.
HermitianEig hermitian_eig(const ComplexMatrix& x, double tol = kHermitianTol);

double lambda_max(const ComplexMatrix& x, double tol = kHermitianTol);

// tr(a * b) in O(rows * cols), without forming the product.
Complex trace_prod(const ComplexMatrix& a, const ComplexMatrix& b);

// Quadratic form x^H Q x, real part only (Q Hermitian).
double quad_form(const ComplexMatrix& q, const ComplexVector& x);

// Clips negative eigenvalues to zero and returns U diag(max(l,0)) U^H.
ComplexMatrix psd_projection(const ComplexMatrix& x);

double max_abs(const ComplexMatrix& x);

}  // namespace rislink::linalg
