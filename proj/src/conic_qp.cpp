// SPDX-License-Identifier: Apache-2.0
//
// Convex QP -> LMI (dual-form cone program).
//
// The free complex entries become real variables y = [Re x_f; Im x_f; t].
// Every convex quadratic is written through a factor Q = L L^H as a Schur
// complement block
//
//     [ s - 2 Re{r^H x}   (L^H x)^T ]
//     [ L^H x             I         ]  >= 0      (real-embedded L^H x),
//
// the objective curvature x^H P x <= t likewise, and each bounded entry as
// [[1, Re x_i, Im x_i], [Re x_i, 1, 0], [Im x_i, 0, 1]] >= 0. The resulting
// problem  max b^T y  s.t.  C - sum_i y_i A_i >= 0  is the dual of the
// standard-form program handled by solve_cone.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rislink/conic.hpp"

namespace rislink::conic {

namespace {

constexpr double kQpPsdTol = 1e-9;
constexpr double kQpFeasibilityTol = 1e-7;

void check_psd(const ComplexMatrix& m, const char* what) {
  if (!linalg::is_hermitian(m, 1e-9)) throw std::invalid_argument(std::string("ConvexQp: ") + what + " is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(m), Eigen::EigenvaluesOnly);
  if (m.size() > 0 && es.eigenvalues().minCoeff() < -kQpPsdTol * (1.0 + linalg::max_abs(m))) {
    throw std::invalid_argument(std::string("ConvexQp: ") + what + " is not PSD");
  }
}

// n x k factor with Q = L L^H, dropping negligible eigenvalues.
ComplexMatrix psd_factor(const ComplexMatrix& q) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(q));
  const RealVector& lam = es.eigenvalues();
  const double top = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > 1e-13 * top && lam(i) > 0.0) keep.push_back(i);
  }
  ComplexMatrix l(q.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    l.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(lam(keep[c]));
  }
  return l;
}

// Accumulates per-variable sparse coefficients on PSD blocks.
class LmiBuilder {
 public:
  explicit LmiBuilder(int num_vars) : per_var_(num_vars) {}

  int add_block(const RealMatrix& c) {
    const int id = static_cast<int>(sizes_.size());
    sizes_.push_back(static_cast<int>(c.rows()));
    c_blocks_.push_back(c);
    return id;
  }

  // S = C - sum y_v A_v, so the coefficient of y_v in S(row,col) is -value.
  void add(int var, int block, int row, int col, double s_coeff) {
    if (s_coeff == 0.0) return;
    if (row > col) std::swap(row, col);
    per_var_[var][block][{row, col}] += -s_coeff;
  }

  bool touches(int var) const { return !per_var_[var].empty(); }

  ConeProgram build(const RealVector& b, const std::vector<int>& vars) const {
    ConeProgram prog;
    prog.psd_sizes = sizes_;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      prog.objective.psd.push_back(SymCoeff::from_dense(static_cast<int>(k), c_blocks_[k], sizes_[k] * sizes_[k]));
    }
    prog.rhs.resize(static_cast<Eigen::Index>(vars.size()));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const int v = vars[i];
      ConeCoeff row;
      for (const auto& [block, entries] : per_var_[v]) {
        SymCoeff c;
        c.block = block;
        c.dense = false;
        for (const auto& [rc, val] : entries) {
          if (val != 0.0) c.entries.push_back({rc.first, rc.second, val});
        }
        row.psd.push_back(std::move(c));
      }
      prog.constraints.push_back(std::move(row));
      prog.rhs(static_cast<Eigen::Index>(i)) = b(v);
    }
    return prog;
  }

 private:
  std::vector<int> sizes_;
  std::vector<RealMatrix> c_blocks_;
  std::vector<std::map<int, std::map<std::pair<int, int>, double>>> per_var_;
};

}  // namespace

void ConvexQp::validate() const {
  if (dim < 1) throw std::invalid_argument("ConvexQp: dimension must be positive");
  if (q.size() != dim) throw std::invalid_argument("ConvexQp: q has wrong length");
  if (P.size() != 0) {
    if (P.rows() != dim || P.cols() != dim) throw std::invalid_argument("ConvexQp: P has wrong size");
    check_psd(P, "P");
  }
  for (const auto& c : constraints) {
    if (c.Q.rows() != dim || c.Q.cols() != dim || c.r.size() != dim) {
      throw std::invalid_argument("ConvexQp: constraint has wrong size");
    }
    check_psd(c.Q, "constraint matrix");
  }
  for (const auto& [i, v] : fixed) {
    if (i < 0 || i >= dim) throw std::invalid_argument("ConvexQp: fixed index out of range");
  }
  for (Eigen::Index i : modulus_bounded) {
    if (i < 0 || i >= dim) throw std::invalid_argument("ConvexQp: bounded index out of range");
  }
}

double ConvexQp::objective_at(const ComplexVector& x) const {
  double v = 2.0 * q.dot(x).real() + constant;
  if (P.size() != 0) v -= linalg::quad_form(P, x);
  return v;
}

double ConvexQp::max_violation_at(const ComplexVector& x) const {
  double viol = 0.0;
  for (const auto& c : constraints) {
    const double scale = std::max({linalg::max_abs(c.Q), c.r.size() ? c.r.cwiseAbs().maxCoeff() : 0.0, 1e-300});
    const double lhs = linalg::quad_form(c.Q, x) + 2.0 * c.r.dot(x).real();
    viol = std::max(viol, (lhs - c.s) / scale);
  }
  for (Eigen::Index i : modulus_bounded) viol = std::max(viol, std::norm(x(i)) - 1.0);
  for (const auto& [i, v] : fixed) viol = std::max(viol, std::abs(x(i) - v));
  return viol;
}

ConicSolution solve_qp(const ConvexQp& p, const SolverSettings& settings) {
  p.validate();
  const Eigen::Index n = p.dim;

  ComplexVector x0 = ComplexVector::Zero(n);
  std::vector<bool> is_fixed(static_cast<std::size_t>(n), false);
  for (const auto& [i, v] : p.fixed) {
    x0(i) = v;
    is_fixed[static_cast<std::size_t>(i)] = true;
  }
  std::vector<Eigen::Index> free_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!is_fixed[static_cast<std::size_t>(i)]) free_idx.push_back(i);
  }
  const int nf = static_cast<int>(free_idx.size());
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < nf; ++k) pos[static_cast<std::size_t>(free_idx[k])] = k;

  ConicSolution out;
  for (Eigen::Index i : p.modulus_bounded) {
    if (is_fixed[static_cast<std::size_t>(i)] && std::norm(x0(i)) > 1.0 + 1e-12) {
      out.status = Status::Infeasible;
      return out;
    }
  }

  const double obj_scale = [&] {
    double s = p.q.cwiseAbs().maxCoeff();
    if (p.P.size() != 0) s = std::max(s, linalg::max_abs(p.P));
    return s > 0.0 ? s : 1.0;
  }();
  const bool has_p = p.P.size() != 0 && linalg::max_abs(p.P) > 0.0;
  const int t_var = has_p ? 2 * nf : -1;
  const int num_vars = 2 * nf + (has_p ? 1 : 0);

  RealVector b = RealVector::Zero(num_vars);
  for (int k = 0; k < nf; ++k) {
    const Complex qk = p.q(free_idx[k]) / obj_scale;
    b(k) = 2.0 * qk.real();
    b(nf + k) = 2.0 * qk.imag();
  }
  if (has_p) b(t_var) = -1.0;

  LmiBuilder lmi(num_vars);

  // Rows of L^H x as affine maps of y: constant part and per-variable part.
  auto add_schur_block = [&](const ComplexMatrix& l, double sigma0, const RealVector& sigma_coeff, bool with_t) {
    const Eigen::Index rank = l.cols();
    const int size = 1 + 2 * static_cast<int>(rank);
    const ComplexMatrix lh = l.adjoint();
    const ComplexVector w0 = lh * x0;
    RealMatrix c = RealMatrix::Identity(size, size);
    c(0, 0) = sigma0;
    for (Eigen::Index r = 0; r < rank; ++r) {
      c(0, 1 + r) = c(1 + r, 0) = w0(r).real();
      c(0, 1 + rank + r) = c(1 + rank + r, 0) = w0(r).imag();
    }
    const int block = lmi.add_block(c);
    for (int k = 0; k < nf; ++k) {
      lmi.add(k, block, 0, 0, -sigma_coeff(k));
      lmi.add(nf + k, block, 0, 0, -sigma_coeff(nf + k));
      const ComplexVector col = lh.col(free_idx[k]);
      for (Eigen::Index r = 0; r < rank; ++r) {
        // d(L^H x)_r / d Re x = col_r ; d/d Im x = j col_r
        lmi.add(k, block, 0, 1 + static_cast<int>(r), col(r).real());
        lmi.add(k, block, 0, 1 + static_cast<int>(rank + r), col(r).imag());
        lmi.add(nf + k, block, 0, 1 + static_cast<int>(r), -col(r).imag());
        lmi.add(nf + k, block, 0, 1 + static_cast<int>(rank + r), col(r).real());
      }
    }
    if (with_t) lmi.add(t_var, block, 0, 0, 1.0);
  };

  std::vector<QuadConstraint> scaled_constraints;
  for (const auto& c : p.constraints) {
    double s = std::max(linalg::max_abs(c.Q), c.r.cwiseAbs().maxCoeff());
    if (!(s > 0.0)) {
      if (c.s < 0.0) {
        out.status = Status::Infeasible;
        return out;
      }
      continue;
    }
    QuadConstraint sc{c.Q / s, c.r / s, c.s / s};
    // sigma(y) = s - 2 Re{r^H x} = sigma0 - sum coeff * y
    const double sigma0 = sc.s - 2.0 * sc.r.dot(x0).real();
    RealVector coeff(2 * nf);
    for (int k = 0; k < nf; ++k) {
      const Complex rk = sc.r(free_idx[k]);
      coeff(k) = 2.0 * rk.real();
      coeff(nf + k) = 2.0 * rk.imag();
    }
    add_schur_block(psd_factor(sc.Q), sigma0, coeff, false);
    scaled_constraints.push_back(std::move(sc));
  }
  if (has_p) add_schur_block(psd_factor(p.P / obj_scale), 0.0, RealVector::Zero(2 * nf), true);

  for (Eigen::Index i : p.modulus_bounded) {
    const int k = pos[static_cast<std::size_t>(i)];
    if (k < 0) continue;
    const int block = lmi.add_block(RealMatrix::Identity(3, 3));
    lmi.add(k, block, 0, 1, 1.0);
    lmi.add(nf + k, block, 0, 2, 1.0);
  }

  // Variables that no block constrains must have zero gradient.
  std::vector<int> vars;
  for (int v = 0; v < num_vars; ++v) {
    if (lmi.touches(v)) {
      vars.push_back(v);
    } else if (std::abs(b(v)) > 0.0) {
      out.status = Status::Unbounded;
      return out;
    }
  }

  ComplexVector x = x0;
  if (!vars.empty()) {
    const ConeSolution cs = solve_cone(lmi.build(b, vars), settings);
    out.iterations = cs.iterations;
    if (cs.status == Status::Infeasible) {
      out.status = Status::Unbounded;
      return out;
    }
    if (cs.status == Status::Unbounded) {
      out.status = Status::Infeasible;
      return out;
    }
    RealVector y = RealVector::Zero(num_vars);
    for (std::size_t i = 0; i < vars.size(); ++i) y(vars[i]) = cs.y(static_cast<Eigen::Index>(i));
    for (int k = 0; k < nf; ++k) x(free_idx[k]) = Complex(y(k), y(nf + k));
    out.status = cs.status;
  } else {
    out.status = Status::Optimal;
  }

  out.vector = x;
  out.objective = p.objective_at(x);
  double viol = 0.0;
  for (const auto& c : scaled_constraints) {
    const double lhs = linalg::quad_form(c.Q, x) + 2.0 * c.r.dot(x).real();
    viol = std::max(viol, (lhs - c.s) / std::max(1.0, std::abs(c.s)));
  }
  for (Eigen::Index i : p.modulus_bounded) viol = std::max(viol, std::norm(x(i)) - 1.0);
  out.max_violation = viol;
  if (out.status == Status::Optimal && viol > kQpFeasibilityTol) out.status = Status::NumericalFailure;
  return out;
}

}  // namespace rislink::conic
