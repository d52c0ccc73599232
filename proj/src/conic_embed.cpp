// SPDX-License-Identifier: Apache-2.0

#include <ostream>
#include <stdexcept>

#include "rislink/conic.hpp"

namespace rislink::conic {

RealMatrix embed_matrix(const ComplexMatrix& x) {
  const Eigen::Index n = x.rows();
  RealMatrix y(2 * n, 2 * n);
  y.topLeftCorner(n, n) = x.real();
  y.topRightCorner(n, n) = -x.imag();
  y.bottomLeftCorner(n, n) = x.imag();
  y.bottomRightCorner(n, n) = x.real();
  return y;
}

ComplexMatrix deembed_matrix(const RealMatrix& y) {
  if (y.rows() != y.cols() || y.rows() % 2 != 0) {
    throw std::invalid_argument("deembed_matrix: expected a square matrix of even size");
  }
  const Eigen::Index n = y.rows() / 2;
  const RealMatrix re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  ComplexMatrix x(n, n);
  x.real() = re;
  x.imag() = im;
  return linalg::hermitian_part(x);
}

void HermitianSdp::validate() const {
  if (dim < 1) throw std::invalid_argument("HermitianSdp: dimension must be positive");
  auto check_matrix = [&](const ComplexMatrix& m, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
      throw std::invalid_argument(std::string("HermitianSdp: ") + what + " has wrong size");
    }
    if (!linalg::is_hermitian(m)) throw std::invalid_argument(std::string("HermitianSdp: ") + what + " is not Hermitian");
  };
  check_matrix(objective, "objective");
  if (scalar_objective.size() != num_scalars) {
    throw std::invalid_argument("HermitianSdp: scalar objective length mismatch");
  }
  for (const auto* list : {&equalities, &inequalities}) {
    for (const auto& c : *list) {
      check_matrix(c.coeff, "constraint matrix");
      if (c.scalar_coeff.size() != num_scalars) {
        throw std::invalid_argument("HermitianSdp: scalar coefficient length mismatch");
      }
    }
  }
}

ConeProgram embed_real(const HermitianSdp& p) {
  p.validate();
  const int n2 = static_cast<int>(2 * p.dim);
  const int ns = static_cast<int>(p.num_scalars);
  const int max_nnz = n2;

  ConeProgram prog;
  prog.psd_sizes = {n2};
  prog.lp_size = ns + static_cast<int>(p.inequalities.size());

  prog.objective.psd.push_back(SymCoeff::from_dense(0, -0.5 * embed_matrix(linalg::hermitian_part(p.objective)), max_nnz));
  for (int s = 0; s < ns; ++s) {
    if (p.scalar_objective(s) != 0.0) prog.objective.lp.emplace_back(s, -p.scalar_objective(s));
  }

  auto add_row = [&](const TraceConstraint& c, int slack) {
    ConeCoeff row;
    row.psd.push_back(SymCoeff::from_dense(0, 0.5 * embed_matrix(linalg::hermitian_part(c.coeff)), max_nnz));
    for (int s = 0; s < ns; ++s) {
      if (c.scalar_coeff(s) != 0.0) row.lp.emplace_back(s, c.scalar_coeff(s));
    }
    if (slack >= 0) row.lp.emplace_back(slack, 1.0);
    prog.constraints.push_back(std::move(row));
  };

  std::vector<double> rhs;
  for (const auto& c : p.equalities) {
    add_row(c, -1);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < p.inequalities.size(); ++j) {
    add_row(p.inequalities[j], ns + static_cast<int>(j));
    rhs.push_back(p.inequalities[j].rhs);
  }
  prog.rhs = Eigen::Map<RealVector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return prog;
}

void dump_sdp(const HermitianSdp& p, std::ostream& out) {
  auto write_matrix = [&](const char* tag, const ComplexMatrix& m) {
    Eigen::Index nnz = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) nnz += m(i, j) != Complex(0.0, 0.0);
    out << "%matrix " << tag << '\n' << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != Complex(0.0, 0.0)) out << i + 1 << ' ' << j + 1 << ' ' << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
      }
    }
  };
  auto write_scalars = [&](const RealVector& v) {
    out << "%scalars";
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v(i);
    out << '\n';
  };
  const auto old_precision = out.precision(17);
  out << "%%HermitianSdp dim " << p.dim << " scalars " << p.num_scalars << " eq " << p.equalities.size() << " ineq "
      << p.inequalities.size() << '\n';
  write_matrix("objective", p.objective);
  write_scalars(p.scalar_objective);
  for (std::size_t i = 0; i < p.equalities.size(); ++i) {
    write_matrix(("eq " + std::to_string(i)).c_str(), p.equalities[i].coeff);
    write_scalars(p.equalities[i].scalar_coeff);
    out << "%rhs " << p.equalities[i].rhs << '\n';
  }
  for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
    write_matrix(("ineq " + std::to_string(i)).c_str(), p.inequalities[i].coeff);
    write_scalars(p.inequalities[i].scalar_coeff);
    out << "%rhs " << p.inequalities[i].rhs << '\n';
  }
  out.precision(old_precision);
}

}  // namespace rislink::conic
