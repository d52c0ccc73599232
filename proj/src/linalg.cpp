// SPDX-License-Identifier: Apache-2.0

#include "rislink/linalg.hpp"

#include <algorithm>

namespace rislink::linalg {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) {
    throw std::invalid_argument("unvec: length does not match rows*cols");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

double max_abs(const ComplexMatrix& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& x, double tol) {
  if (x.rows() != x.cols()) return false;
  const double dev = max_abs(x - x.adjoint());
  return dev <= tol * (1.0 + max_abs(x));
}

ComplexMatrix hermitian_part(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("hermitian_part: matrix is not square");
  }
  return 0.5 * (x + x.adjoint());
}

HermitianEig hermitian_eig(const ComplexMatrix& x, double tol) {
  if (!is_hermitian(x, tol)) {
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: decomposition failed");
  }
  // Eigen sorts ascending.
  const Eigen::Index n = x.rows();
  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

double lambda_max(const ComplexMatrix& x, double tol) {
  if (!is_hermitian(x, tol)) {
    throw std::invalid_argument("lambda_max: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Complex trace_prod(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw std::invalid_argument("trace_prod: shape mismatch");
  }
  // tr(AB) = sum_ij A(i,j) B(j,i)
  return a.cwiseProduct(b.transpose()).sum();
}

double quad_form(const ComplexMatrix& q, const ComplexVector& x) {
  return x.dot(q * x).real();
}

ComplexMatrix psd_projection(const ComplexMatrix& x) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x));
  const RealVector clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace rislink::linalg
