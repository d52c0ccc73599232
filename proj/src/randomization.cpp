// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "rislink/cct_sdp.hpp"

namespace rislink::cct {

namespace {

std::optional<ComplexVector> to_feasible(const ComplexVector& xi, RecoveryKind kind, const RecoveryContext& ctx) {
  if (kind == RecoveryKind::UnitModulusAnchored) return sysmodel::project_anchored(xi);
  const double load = linalg::quad_form(ctx.power_matrix, xi);
  if (load <= ctx.power_budget) return xi;
  if (!(ctx.power_budget > 0.0) || !(load > 0.0)) return std::nullopt;
  return ComplexVector(xi * std::sqrt(ctx.power_budget / load));
}

}  // namespace

Recovery gaussian_randomize_vector(const ComplexMatrix& X, RecoveryKind kind, const RecoveryContext& ctx, int trials,
                                   Rng& rng) {
  if (trials < 0) throw std::invalid_argument("gaussian_randomize_vector: trials must be >= 0");
  if (!ctx.objective) throw std::invalid_argument("gaussian_randomize_vector: missing objective");
  const Eigen::Index n = X.rows();
  if (kind == RecoveryKind::PowerFeasible && (ctx.power_matrix.rows() != n || ctx.power_matrix.cols() != n)) {
    throw std::invalid_argument("gaussian_randomize_vector: power matrix has wrong size");
  }

  const linalg::HermitianEig eig = linalg::hermitian_eig(X, 1e-9);
  const linalg::RealVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix factor = eig.vectors * root.asDiagonal();

  Recovery best;
  best.objective = -std::numeric_limits<double>::infinity();
  auto consider = [&](const ComplexVector& xi, int index) {
    const auto cand = to_feasible(xi, kind, ctx);
    if (!cand) return;
    const double value = ctx.objective(*cand);
    if (std::isnan(value)) return;
    if (!best.found || value > best.objective) {
      best.found = true;
      best.vector = *cand;
      best.objective = value;
      best.winner = index;
    }
  };

  consider(factor.col(0), 0);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexVector w(n);
  for (int t = 1; t <= trials; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      w(i) = linalg::Complex(re, im);
    }
    consider(factor * w, t);
  }
  return best;
}

}  // namespace rislink::cct
