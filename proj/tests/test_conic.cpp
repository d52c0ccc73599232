// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "rislink/cct_sdp.hpp"
#include "rislink/conic.hpp"

using namespace rislink;
using namespace rislink::conic;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::RealVector;

namespace {

// Projected gradient ascent for max 2 Re{q^H x} - x^H P x over ||x|| <= 1.
ComplexVector projected_gradient(const ComplexVector& q, const ComplexMatrix& P, int iterations) {
  const double lip = 2.0 * std::max(linalg::lambda_max(P), 1e-12);
  ComplexVector x = ComplexVector::Zero(q.size());
  for (int k = 0; k < iterations; ++k) {
    ComplexVector next = x + (2.0 * q - 2.0 * P * x) / lip;
    if (next.norm() > 1.0) next /= next.norm();
    const double moved = (next - x).norm();
    x = next;
    if (moved < 1e-14) break;
  }
  return x;
}

HermitianSdp trace_bounded(const ComplexMatrix& c, double bound, bool equality) {
  HermitianSdp p;
  p.dim = c.rows();
  p.objective = c;
  p.scalar_objective = RealVector(0);
  TraceConstraint t{ComplexMatrix::Identity(p.dim, p.dim), RealVector(0), bound};
  (equality ? p.equalities : p.inequalities).push_back(t);
  return p;
}

}  // namespace

TEST_CASE("embedding preserves definiteness and doubles eigenvalues") {
  CHECK(embed_matrix(ComplexMatrix::Identity(3, 3)).isApprox(linalg::RealMatrix::Identity(6, 6)));

  ComplexMatrix indef = ComplexMatrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  Eigen::SelfAdjointEigenSolver<linalg::RealMatrix> es(embed_matrix(indef));
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(-1.0));
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h = oracle::random_hermitian(rng, 4);
    const RealVector ce = linalg::hermitian_eig(h).values;
    Eigen::SelfAdjointEigenSolver<linalg::RealMatrix> re(embed_matrix(h));
    const RealVector r = re.eigenvalues().reverse();
    for (int i = 0; i < 4; ++i) {
      CHECK(r(2 * i) == doctest::Approx(ce(i)).epsilon(1e-10));
      CHECK(r(2 * i + 1) == doctest::Approx(ce(i)).epsilon(1e-10));
    }
    const ComplexMatrix back = deembed_matrix(embed_matrix(h));
    CHECK(linalg::max_abs(back - h) <= 1e-12);
    CHECK(linalg::max_abs(back - back.adjoint()) <= 1e-9);
  }
}

TEST_CASE("trace-bounded SDPs") {
  const ConicSolution a = solve_sdp(trace_bounded(ComplexMatrix::Identity(2, 2), 1.0, false));
  REQUIRE(a.status == Status::Optimal);
  CHECK(a.objective == doctest::Approx(1.0).epsilon(1e-7));

  ComplexMatrix c = ComplexMatrix::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  const ConicSolution b = solve_sdp(trace_bounded(c, 1.0, true));
  REQUIRE(b.status == Status::Optimal);
  CHECK(b.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(b.matrix(0, 0) - 1.0) < 1e-6);
  CHECK(std::abs(b.matrix(1, 1)) < 1e-6);
  CHECK(b.max_violation <= kFeasibilityTol);
  CHECK(b.min_eigenvalue >= -kPsdTol);
}

TEST_CASE("largest eigenvalue as an SDP") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix h = oracle::random_hermitian(rng, 5);
    const ConicSolution s = solve_sdp(trace_bounded(h, 1.0, true));
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(linalg::lambda_max(h)).epsilon(1e-7));
  }
}

TEST_CASE("infeasible and unbounded SDPs are reported") {
  HermitianSdp p = trace_bounded(ComplexMatrix::Identity(2, 2), -1.0, true);
  CHECK(solve_sdp(p).status == Status::Infeasible);

  HermitianSdp u;
  u.dim = 2;
  u.objective = ComplexMatrix::Identity(2, 2);
  u.scalar_objective = RealVector(0);
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 1.0;
  u.equalities.push_back({g, RealVector(0), 1.0});
  CHECK(solve_sdp(u).status == Status::Unbounded);
}

TEST_CASE("malformed SDP data is rejected") {
  HermitianSdp p = trace_bounded(ComplexMatrix::Identity(2, 2), 1.0, false);
  p.objective(0, 1) = 1.0;  // no longer Hermitian
  CHECK_THROWS_AS(solve_sdp(p), std::invalid_argument);
  HermitianSdp q = trace_bounded(ComplexMatrix::Identity(2, 2), 1.0, false);
  q.inequalities[0].coeff = ComplexMatrix::Identity(3, 3);
  CHECK_THROWS_AS(solve_sdp(q), std::invalid_argument);
}

TEST_CASE("phase SDP with a single relay antenna matches a phase grid") {
  // max tr(V E) s.t. diag(V) = 1 over two RIS elements; rank-one recovery
  // is compared with an exhaustive 72 x 72 grid over both phases.
  std::mt19937_64 rng(15);
  for (int t = 0; t < 5; ++t) {
    const ComplexVector w = oracle::random_complex(rng, 3, 1).col(0);
    const ComplexMatrix e = w * w.adjoint();
    HermitianSdp p;
    p.dim = 3;
    p.objective = e;
    p.scalar_objective = RealVector(0);
    for (int k = 0; k < 3; ++k) {
      ComplexMatrix ek = ComplexMatrix::Zero(3, 3);
      ek(k, k) = 1.0;
      p.equalities.push_back({ek, RealVector(0), 1.0});
    }
    const ConicSolution s = solve_sdp(p);
    REQUIRE(s.status == Status::Optimal);

    cct::RecoveryContext ctx;
    ctx.objective = [&](const ComplexVector& v) { return linalg::quad_form(e, v); };
    channel::Rng draws(t);
    const cct::Recovery rec =
        cct::gaussian_randomize_vector(s.matrix, cct::RecoveryKind::UnitModulusAnchored, ctx, 50, draws);
    REQUIRE(rec.found);

    double best = 0.0;
    for (int i = 0; i < 72; ++i) {
      for (int k = 0; k < 72; ++k) {
        ComplexVector v(3);
        v << std::polar(1.0, 2.0 * std::numbers::pi * i / 72), std::polar(1.0, 2.0 * std::numbers::pi * k / 72), 1.0;
        best = std::max(best, linalg::quad_form(e, v));
      }
    }
    CHECK(rec.objective == doctest::Approx(best).epsilon(1e-2));
    CHECK(rec.objective <= s.objective + 1e-6 * std::max(1.0, s.objective));
  }
}

TEST_CASE("QP on the unit ball") {
  ComplexVector q(3);
  q << linalg::Complex(1.0, 2.0), -0.5, linalg::Complex(0.0, 0.3);
  ConvexQp p;
  p.dim = 3;
  p.q = q;
  p.constraints.push_back({ComplexMatrix::Identity(3, 3), ComplexVector::Zero(3), 1.0});
  const ConicSolution s = solve_qp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(2.0 * q.norm()).epsilon(1e-7));
  CHECK((s.vector - q / q.norm()).norm() < 1e-6);
}

TEST_CASE("QP fixed entries and modulus bounds") {
  ComplexVector q(3);
  q << linalg::Complex(0.0, 1.0), linalg::Complex(-2.0, 0.0), 5.0;
  ConvexQp p;
  p.dim = 3;
  p.q = q;
  p.fixed.emplace_back(2, linalg::Complex(1.0, 0.0));
  p.modulus_bounded = {0, 1};
  const ConicSolution s = solve_qp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.vector(2) == linalg::Complex(1.0, 0.0));
  CHECK(std::abs(s.vector(0) - linalg::Complex(0.0, 1.0)) < 1e-5);
  CHECK(std::abs(s.vector(1) - linalg::Complex(-1.0, 0.0)) < 1e-5);
  CHECK(s.objective == doctest::Approx(2.0 * (1.0 + 2.0 + 5.0)).epsilon(1e-7));
  CHECK(p.max_violation_at(s.vector) <= 1e-7);
}

TEST_CASE("QP against projected gradient") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const ComplexVector q = oracle::random_complex(rng, 4, 1).col(0);
    const ComplexMatrix P = oracle::random_psd(rng, 4, 2);
    ConvexQp p;
    p.dim = 4;
    p.q = q;
    p.P = P;
    p.constraints.push_back({ComplexMatrix::Identity(4, 4), ComplexVector::Zero(4), 1.0});
    const ConicSolution s = solve_qp(p);
    REQUIRE(s.status == Status::Optimal);
    const ComplexVector ref = projected_gradient(q, P, 200000);
    CHECK(s.objective == doctest::Approx(p.objective_at(ref)).epsilon(1e-5));
    CHECK(p.max_violation_at(s.vector) <= 1e-7);
  }
}

TEST_CASE("QP status reporting") {
  ConvexQp unbounded;
  unbounded.dim = 2;
  unbounded.q = ComplexVector::Ones(2);
  CHECK(solve_qp(unbounded).status == Status::Unbounded);

  ConvexQp infeasible;
  infeasible.dim = 2;
  infeasible.q = ComplexVector::Ones(2);
  infeasible.constraints.push_back({ComplexMatrix::Identity(2, 2), ComplexVector::Zero(2), 1.0});
  infeasible.fixed.emplace_back(0, linalg::Complex(2.0, 0.0));
  CHECK(solve_qp(infeasible).status == Status::Infeasible);

  ConvexQp nonconvex;
  nonconvex.dim = 2;
  nonconvex.q = ComplexVector::Ones(2);
  nonconvex.P = -ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(solve_qp(nonconvex), std::invalid_argument);
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(23);
  const ComplexMatrix h = oracle::random_hermitian(rng, 4);
  const ConicSolution a = solve_sdp(trace_bounded(h, 1.0, true));
  const ConicSolution b = solve_sdp(trace_bounded(h, 1.0, true));
  CHECK(a.matrix == b.matrix);
  CHECK(a.objective == b.objective);
}

TEST_CASE("problem dump") {
  HermitianSdp p = trace_bounded(ComplexMatrix::Identity(2, 2), 1.0, false);
  std::ostringstream out;
  dump_sdp(p, out);
  CHECK(out.str().find("objective") != std::string::npos);
  CHECK(out.str().find("1 1 1 0") != std::string::npos);
}
