// SPDX-License-Identifier: Apache-2.0
//
// Convex subproblem layer.
//
// Two declarative problem kinds are supported:
//
//   HermitianSdp  maximize tr(C0 X) + c^T t
//                 s.t. tr(F_i X) + f_i^T t  = b_i
//                      tr(G_j X) + g_j^T t <= c_j
//                      X Hermitian PSD, t >= 0 (extra scalar variables)
//
//   ConvexQp      maximize 2 Re{q^H x} - x^H P x + const
//                 s.t. x^H Q_k x + 2 Re{r_k^H x} <= s_k,  x(i) = fixed_i,
//                      |x(i)|^2 <= 1 for selected entries
//
// Both are lowered to a real cone program over PSD blocks and the
// nonnegative orthant and solved by an infeasible-start primal-dual
// interior-point method (HKM direction with Mehrotra predictor-corrector).
//
// Complex-to-real embedding: a Hermitian X maps to
//   emb(X) = [[Re X, -Im X], [Im X, Re X]],
// which is PSD iff X is, with every eigenvalue of X appearing twice. Data
// matrices are embedded as emb(F)/2 so that <emb(F)/2, emb(X)> = tr(F X) and
// right-hand sides carry over unchanged.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rislink/linalg.hpp"

namespace rislink::conic {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::RealMatrix;
using linalg::RealVector;

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(Status s);

struct SolverSettings {
  double tolerance = 1e-9;      // relative gap and infeasibility targets
  int max_iterations = 120;
  double step_fraction = 0.95;  // fraction-to-boundary
  bool verbose = false;
};

// ---------------------------------------------------------------------------
// Real cone program in standard form
//
//   primal: minimize <C, X>  s.t. <A_i, X> = b_i, X in K
//   dual:   maximize b^T y   s.t. C - sum_i y_i A_i = Z in K
//
// K is a product of symmetric PSD blocks and one nonnegative orthant.

// Symmetric coefficient on one PSD block, dense or as an upper-triangle list.
struct SymCoeff {
  struct Entry {
    int row;
    int col;  // row <= col; off-diagonal entries stand for both (row,col) and (col,row)
    double value;
  };

  int block = 0;
  bool dense = false;
  RealMatrix matrix;
  std::vector<Entry> entries;

  // Picks the sparse form when at most `max_nnz` upper entries are nonzero.
  static SymCoeff from_dense(int block, const RealMatrix& m, int max_nnz);
  double dot(const RealMatrix& w) const;  // <this, W> for symmetric W
  void add_to(RealMatrix& w, double scale) const;
  double max_abs() const;
};

struct ConeCoeff {
  std::vector<SymCoeff> psd;
  std::vector<std::pair<int, double>> lp;  // (orthant index, value)

  double max_abs() const;
  void scale(double factor);
};

struct ConeProgram {
  std::vector<int> psd_sizes;
  int lp_size = 0;
  ConeCoeff objective;
  std::vector<ConeCoeff> constraints;
  RealVector rhs;

  void validate() const;
};

struct ConeSolution {
  Status status = Status::NumericalFailure;
  std::vector<RealMatrix> X;
  std::vector<RealMatrix> Z;
  RealVector x_lp;
  RealVector z_lp;
  RealVector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;  // relative
  double dual_infeasibility = 0.0;    // relative
  double relative_gap = 0.0;
  int iterations = 0;
};

ConeSolution solve_cone(const ConeProgram& prog, const SolverSettings& settings = {});

// ---------------------------------------------------------------------------
// Hermitian SDP

struct TraceConstraint {
  ComplexMatrix coeff;      // Hermitian
  RealVector scalar_coeff;  // length = num_scalars (may be empty when num_scalars == 0)
  double rhs = 0.0;
};

struct HermitianSdp {
  Eigen::Index dim = 0;
  ComplexMatrix objective;       // maximize tr(objective X) + scalar_objective^T t
  Eigen::Index num_scalars = 0;  // t >= 0
  RealVector scalar_objective;
  std::vector<TraceConstraint> equalities;
  std::vector<TraceConstraint> inequalities;

  void validate() const;
};

struct ConicSolution {
  Status status = Status::NumericalFailure;
  double objective = 0.0;
  ComplexMatrix matrix;  // SDP variable
  RealVector scalars;    // SDP scalar variables
  ComplexVector vector;  // QP variable
  double max_violation = 0.0;   // on scale-normalized data
  double min_eigenvalue = 0.0;  // SDP variable
  int iterations = 0;
};

inline constexpr double kFeasibilityTol = 1e-6;
inline constexpr double kPsdTol = 1e-7;

RealMatrix embed_matrix(const ComplexMatrix& x);
ComplexMatrix deembed_matrix(const RealMatrix& y);

// Real program whose single PSD block has size 2*dim. The orthant holds the
// scalar variables first, then one slack per inequality. The objective is
// negated (the real program minimizes).
ConeProgram embed_real(const HermitianSdp& p);

// Scales the objective and every constraint row to unit largest coefficient,
// solves, and reports the objective in original units.
ConicSolution solve_sdp(const HermitianSdp& p, const SolverSettings& settings = {});

// ---------------------------------------------------------------------------
// Convex quadratic problem

struct QuadConstraint {
  ComplexMatrix Q;  // Hermitian PSD
  ComplexVector r;
  double s = 0.0;
};

struct ConvexQp {
  Eigen::Index dim = 0;
  ComplexVector q;
  ComplexMatrix P;  // Hermitian PSD; empty means zero
  double constant = 0.0;
  std::vector<QuadConstraint> constraints;
  std::vector<std::pair<Eigen::Index, Complex>> fixed;
  std::vector<Eigen::Index> modulus_bounded;  // |x(i)|^2 <= 1

  void validate() const;
  double objective_at(const ComplexVector& x) const;
  double max_violation_at(const ComplexVector& x) const;
};

ConicSolution solve_qp(const ConvexQp& p, const SolverSettings& settings = {});

// ---------------------------------------------------------------------------
// Plain-text dump of SDP data for offline inspection. Each matrix is
// written in coordinate form, one "row col re im" line per nonzero.

void dump_sdp(const HermitianSdp& p, std::ostream& out);

}  // namespace rislink::conic
