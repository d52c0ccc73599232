// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "rislink/conic.hpp"

namespace rislink::conic {

namespace {

double coeff_scale(const ComplexMatrix& m, const RealVector& s) {
  double v = linalg::max_abs(m);
  if (s.size() > 0) v = std::max(v, s.cwiseAbs().maxCoeff());
  return v > 0.0 ? v : 1.0;
}

double row_value(const TraceConstraint& c, const ComplexMatrix& x, const RealVector& t) {
  double v = linalg::trace_prod(c.coeff, x).real();
  if (t.size() > 0) v += c.scalar_coeff.dot(t);
  return v;
}

}  // namespace

ConicSolution solve_sdp(const HermitianSdp& p, const SolverSettings& settings) {
  p.validate();

  HermitianSdp scaled = p;
  const double obj_scale = coeff_scale(p.objective, p.scalar_objective);
  scaled.objective /= obj_scale;
  scaled.scalar_objective /= obj_scale;
  for (auto* list : {&scaled.equalities, &scaled.inequalities}) {
    for (auto& c : *list) {
      const double s = coeff_scale(c.coeff, c.scalar_coeff);
      c.coeff /= s;
      c.scalar_coeff /= s;
      c.rhs /= s;
    }
  }

  const ConeSolution cs = solve_cone(embed_real(scaled), settings);

  ConicSolution out;
  out.iterations = cs.iterations;
  out.matrix = deembed_matrix(cs.X.front());
  out.scalars = cs.x_lp.head(p.num_scalars);
  switch (cs.status) {
    case Status::Infeasible: out.status = Status::Infeasible; return out;
    case Status::Unbounded: out.status = Status::Unbounded; return out;
    default: break;
  }

  out.objective = linalg::trace_prod(p.objective, out.matrix).real();
  if (p.num_scalars > 0) out.objective += p.scalar_objective.dot(out.scalars);

  double viol = 0.0;
  for (const auto& c : scaled.equalities) viol = std::max(viol, std::abs(row_value(c, out.matrix, out.scalars) - c.rhs));
  for (const auto& c : scaled.inequalities) viol = std::max(viol, row_value(c, out.matrix, out.scalars) - c.rhs);
  for (Eigen::Index i = 0; i < out.scalars.size(); ++i) viol = std::max(viol, -out.scalars(i));
  out.max_violation = viol;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.matrix, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  const double psd_floor = -kPsdTol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

  const bool accurate = viol <= kFeasibilityTol && out.min_eigenvalue >= psd_floor;
  out.status = (cs.status == Status::Optimal && accurate) ? Status::Optimal : Status::NumericalFailure;
  return out;
}

}  // namespace rislink::conic
