// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <limits>

#include "oracles.hpp"
#include "rislink/cct_sdp.hpp"

using namespace rislink;
using namespace rislink::cct;
using conic::Status;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

namespace {

// Unit-variance channels with O(1) SNR so the grid comparisons are sharp.
sysmodel::PowerConfig unit_power() {
  sysmodel::PowerConfig pw;
  pw.ps_dbm = 10.0;
  pw.pr_dbm = 10.0;
  pw.sigma2_dbm = 0.0;
  return pw;
}

ComplexVector grid_vector(int i, int points) {
  ComplexVector v(2);
  v << std::polar(1.0, 2.0 * std::numbers::pi * i / points), 1.0;
  return v;
}

}  // namespace

TEST_CASE("lifted matrices reproduce the link quantities") {
  std::mt19937_64 rng(41);
  const auto pw = unit_power();
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index m = 1 + t % 3, n = 1 + t % 5;
    const auto cc = channel::compose(oracle::unit_channels(rng, m, n));
    const ComplexVector v1 = oracle::slot1_vector(oracle::random_angles(rng, n));
    const ComplexVector v2 = oracle::slot2_vector(oracle::random_angles(rng, n));
    const ComplexMatrix A = oracle::random_complex(rng, m, m);
    const LiftedMatrices bcd = build_bcd(cc, v1 * v1.adjoint(), v2 * v2.adjoint(), pw);
    const ComplexVector a = linalg::vec(A);

    const double num = pw.gamma_s() * std::norm(v2.dot(cc.H_rid * A * cc.H_sir * v1));
    const double den = (v2.adjoint() * cc.H_rid * A).squaredNorm();
    const double pow = pw.gamma_s() * (A * cc.H_sir * v1).squaredNorm();
    CHECK(linalg::quad_form(bcd.B, a) == doctest::Approx(num).epsilon(1e-10));
    CHECK(linalg::quad_form(bcd.C, a) == doctest::Approx(den).epsilon(1e-10));
    CHECK(linalg::quad_form(bcd.D, a) == doctest::Approx(pow).epsilon(1e-10));
    CHECK(linalg::hermitian_eig(bcd.B, 1e-9).values.minCoeff() >= -1e-9 * (1.0 + linalg::max_abs(bcd.B)));
    CHECK(linalg::hermitian_eig(bcd.C, 1e-9).values.minCoeff() >= -1e-9 * (1.0 + linalg::max_abs(bcd.C)));
    CHECK(linalg::hermitian_eig(bcd.D, 1e-9).values.minCoeff() >= -1e-9 * (1.0 + linalg::max_abs(bcd.D)));
  }
}

TEST_CASE("lifted matrices vanish with the channels") {
  channel::CompositeChannels cc{ComplexMatrix::Zero(2, 4), ComplexMatrix::Zero(4, 2)};
  const ComplexMatrix V = ComplexMatrix::Ones(4, 4);
  const LiftedMatrices bcd = build_bcd(cc, V, V, unit_power());
  CHECK(linalg::max_abs(bcd.B) == 0.0);
  CHECK(linalg::max_abs(bcd.C) == 0.0);
  CHECK(linalg::max_abs(bcd.D) == 0.0);
  CHECK_THROWS_AS(build_bcd(cc, ComplexMatrix::Ones(3, 3), V, unit_power()), std::invalid_argument);
}

TEST_CASE("relay subproblem") {
  std::mt19937_64 rng(43);
  auto pw = unit_power();
  const auto cc = channel::compose(oracle::unit_channels(rng, 2, 3));
  const ComplexVector v1 = oracle::slot1_vector(oracle::random_angles(rng, 3));
  const ComplexVector v2 = oracle::slot2_vector(oracle::random_angles(rng, 3));
  const ComplexMatrix V1 = v1 * v1.adjoint(), V2 = v2 * v2.adjoint();

  SUBCASE("scaling slack matches its definition") {
    const ASubproblem s = solve_a_subproblem(cc, V1, V2, pw);
    REQUIRE(s.status == Status::Optimal);
    const LiftedMatrices bcd = build_bcd(cc, V1, V2, pw);
    const double tr_c = linalg::trace_prod(bcd.C, s.A_bar).real();
    CHECK(s.m == doctest::Approx(1.0 / (tr_c + 1.0)).epsilon(1e-8));
    // Budget holds for the de-scaled matrix.
    const double load = linalg::trace_prod(bcd.D + ComplexMatrix::Identity(4, 4), s.A_bar).real();
    CHECK(load <= pw.gamma_r() * (1.0 + 1e-6));
    // The relaxed optimum dominates every rank-one beamformer at full power.
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix A = sysmodel::scale_to_budget(oracle::random_complex(rng, 2, 2), v1, cc, pw);
      CHECK(sysmodel::snr({A, v1, v2}, cc, pw) <= s.sdr_value * (1.0 + 1e-6));
    }
  }
  SUBCASE("vanishing budget") {
    pw.pr_dbm = -80.0;
    const ASubproblem s = solve_a_subproblem(cc, V1, V2, pw);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.sdr_value < 1e-6);
  }
}

TEST_CASE("relay subproblem with one antenna matches the scalar optimum") {
  std::mt19937_64 rng(47);
  const auto pw = unit_power();
  for (int t = 0; t < 10; ++t) {
    const auto cc = channel::compose(oracle::unit_channels(rng, 1, 2));
    const ComplexVector v1 = oracle::slot1_vector(oracle::random_angles(rng, 2));
    const ComplexVector v2 = oracle::slot2_vector(oracle::random_angles(rng, 2));
    const LiftedMatrices bcd = build_bcd(cc, v1 * v1.adjoint(), v2 * v2.adjoint(), pw);
    const double ref = oracle::scalar_fraction_max(bcd.B(0, 0).real(), bcd.C(0, 0).real(), bcd.D(0, 0).real(),
                                                   pw.gamma_r());
    const ASubproblem s = solve_a_subproblem(cc, v1 * v1.adjoint(), v2 * v2.adjoint(), pw);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.sdr_value == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("slot-1 phase subproblem") {
  std::mt19937_64 rng(53);
  const auto pw = unit_power();

  SUBCASE("zero beamformer") {
    const auto cc = channel::compose(oracle::unit_channels(rng, 2, 3));
    const ComplexVector v2 = oracle::slot2_vector(oracle::random_angles(rng, 3));
    const V1Subproblem s = solve_v1_subproblem(cc, ComplexMatrix::Zero(2, 2), v2 * v2.adjoint(), pw);
    REQUIRE(s.status == Status::Optimal);
    CHECK(std::abs(s.sdp_value) < 1e-6);
  }
  SUBCASE("constraints hold and one element matches a phase grid") {
    for (int t = 0; t < 5; ++t) {
      const auto cc = channel::compose(oracle::unit_channels(rng, 2, 1));
      const ComplexVector v1 = oracle::slot1_vector(oracle::random_angles(rng, 1));
      const ComplexVector v2 = oracle::slot2_vector(oracle::random_angles(rng, 1));
      // Leave some headroom so the power row is not active everywhere.
      const ComplexMatrix A = 0.7 * sysmodel::scale_to_budget(oracle::random_complex(rng, 2, 2), v1, cc, pw);
      const V1Subproblem s = solve_v1_subproblem(cc, A, v2 * v2.adjoint(), pw);
      REQUIRE(s.status == Status::Optimal);
      for (int k = 0; k < 2; ++k) CHECK(std::abs(s.V1(k, k) - 1.0) < 1e-8);
      CHECK(linalg::hermitian_eig(s.V1, 1e-9).values.minCoeff() >= -1e-7);

      auto scored = [&](const ComplexVector& v) {
        sysmodel::SolutionState st{A, v, v2};
        st.A *= sysmodel::power_rescale_factor(st, cc, pw);
        return sysmodel::snr(st, cc, pw);
      };
      RecoveryContext ctx;
      ctx.objective = scored;
      channel::Rng draws(t);
      const Recovery rec = gaussian_randomize_vector(s.V1, RecoveryKind::UnitModulusAnchored, ctx, 50, draws);
      REQUIRE(rec.found);
      double best = 0.0;
      for (int i = 0; i < 72; ++i) best = std::max(best, scored(grid_vector(i, 72)));
      CHECK(rec.objective == doctest::Approx(best).epsilon(1e-2));
    }
  }
}

TEST_CASE("slot-2 phase subproblem") {
  std::mt19937_64 rng(59);
  const auto pw = unit_power();

  SUBCASE("zero beamformer") {
    const auto cc = channel::compose(oracle::unit_channels(rng, 2, 3));
    const ComplexVector v1 = oracle::slot1_vector(oracle::random_angles(rng, 3));
    const V2Subproblem s = solve_v2_subproblem(cc, ComplexMatrix::Zero(2, 2), v1 * v1.adjoint(), pw);
    REQUIRE(s.status == Status::Optimal);
    CHECK(std::abs(s.sdr_value) < 1e-6);
  }
  SUBCASE("scaling slack and one-element grid") {
    for (int t = 0; t < 5; ++t) {
      const auto cc = channel::compose(oracle::unit_channels(rng, 2, 1));
      const ComplexVector v1 = oracle::slot1_vector(oracle::random_angles(rng, 1));
      const ComplexMatrix A = sysmodel::scale_to_budget(oracle::random_complex(rng, 2, 2), v1, cc, pw);
      const V2Subproblem s = solve_v2_subproblem(cc, A, v1 * v1.adjoint(), pw);
      REQUIRE(s.status == Status::Optimal);
      const ComplexMatrix noise = cc.H_rid * A;
      const double tr = linalg::trace_prod(s.V2, noise * noise.adjoint()).real();
      CHECK(s.p == doctest::Approx(1.0 / (tr + 1.0)).epsilon(1e-8));
      for (int k = 0; k < 2; ++k) CHECK(std::abs(s.V2(k, k) - 1.0) < 1e-6);

      RecoveryContext ctx;
      ctx.objective = [&](const ComplexVector& v) { return sysmodel::snr({A, v1, v}, cc, pw); };
      channel::Rng draws(t);
      const Recovery rec = gaussian_randomize_vector(s.V2, RecoveryKind::UnitModulusAnchored, ctx, 50, draws);
      REQUIRE(rec.found);
      double best = 0.0;
      for (int i = 0; i < 72; ++i) best = std::max(best, ctx.objective(grid_vector(i, 72)));
      CHECK(rec.objective == doctest::Approx(best).epsilon(1e-2));
      CHECK(rec.objective <= s.sdr_value * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("Gaussian randomization") {
  std::mt19937_64 rng(61);
  const ComplexMatrix E = oracle::random_psd(rng, 4, 2);
  RecoveryContext ctx;
  ctx.objective = [&](const ComplexVector& v) { return linalg::quad_form(E, v); };

  SUBCASE("rank-one input returns its generator") {
    const ComplexVector v = oracle::slot1_vector(oracle::random_angles(rng, 3));
    channel::Rng draws(1);
    const Recovery eig = gaussian_randomize_vector(v * v.adjoint(), RecoveryKind::UnitModulusAnchored, ctx, 0, draws);
    REQUIRE(eig.found);
    CHECK(eig.winner == 0);
    CHECK((eig.vector - v).norm() < 1e-12);
    // Draws see the square roots of round-off eigenvalues, about 1e-8.
    const Recovery rec =
        gaussian_randomize_vector(v * v.adjoint(), RecoveryKind::UnitModulusAnchored, ctx, 10, draws);
    CHECK((rec.vector - v).norm() < 1e-6);
    CHECK(rec.objective == doctest::Approx(ctx.objective(v)).epsilon(1e-6));
  }
  SUBCASE("more draws never hurt") {
    const ComplexMatrix X = oracle::random_psd(rng, 4, 3);
    channel::Rng d1(9), d100(9);
    const Recovery one = gaussian_randomize_vector(X, RecoveryKind::UnitModulusAnchored, ctx, 1, d1);
    const Recovery many = gaussian_randomize_vector(X, RecoveryKind::UnitModulusAnchored, ctx, 100, d100);
    CHECK(many.objective >= one.objective);
  }
  SUBCASE("power-feasible candidates respect the budget") {
    const ComplexMatrix X = oracle::random_psd(rng, 4, 3);
    RecoveryContext pc = ctx;
    pc.power_matrix = oracle::random_psd(rng, 4, 4) + ComplexMatrix::Identity(4, 4);
    pc.power_budget = 2.0;
    channel::Rng draws(3);
    const Recovery rec = gaussian_randomize_vector(X, RecoveryKind::PowerFeasible, pc, 20, draws);
    REQUIRE(rec.found);
    CHECK(linalg::quad_form(pc.power_matrix, rec.vector) <= 2.0 * (1.0 + 1e-12));
    pc.power_budget = 0.0;
    channel::Rng d2(3);
    CHECK_FALSE(gaussian_randomize_vector(X, RecoveryKind::PowerFeasible, pc, 5, d2).found);
  }
  SUBCASE("argument checks") {
    channel::Rng draws(1);
    CHECK_THROWS_AS(gaussian_randomize_vector(E, RecoveryKind::UnitModulusAnchored, ctx, -1, draws),
                    std::invalid_argument);
    CHECK_THROWS_AS(gaussian_randomize_vector(E, RecoveryKind::PowerFeasible, ctx, 1, draws), std::invalid_argument);
  }
}

TEST_CASE("alternating optimization") {
  const channel::LinkConfig link;
  sysmodel::PowerConfig pw;
  pw.ps_dbm = 25.0;
  channel::Rng rng(71);
  const auto cc = channel::compose(channel::sample_channels(link.geometry, link.path_loss, 2, 16, rng));
  const auto init = sysmodel::initial_state(cc, pw, rng);

  SUBCASE("converges with monotone incumbent") {
    AoOptions opts;
    channel::Rng draws(5);
    const AoResult r = optimize(cc, pw, init, opts, draws);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations <= 20);
    CHECK(r.trace.best_rate() >= r.trace.rates.front());
    for (std::size_t i = 1; i < r.trace.rates.size(); ++i) CHECK(r.trace.rates[i] >= r.trace.rates[i - 1]);
    for (std::size_t i = 1; i < r.trace.rows.size(); ++i) CHECK(r.trace.rows[i].rate >= r.trace.rows[i - 1].rate);
    CHECK(sysmodel::is_power_feasible(r.state, cc, pw));
    CHECK(sysmodel::is_anchored_unit_modulus(r.state.v1));
    CHECK(sysmodel::is_anchored_unit_modulus(r.state.v2));
    CHECK(sysmodel::rate(sysmodel::snr(r.state, cc, pw)) == doctest::Approx(r.trace.best_rate()).epsilon(1e-12));
  }
  SUBCASE("loose tolerance stops after one pass") {
    AoOptions opts;
    opts.tolerance = 10.0;
    channel::Rng draws(5);
    const AoResult r = optimize(cc, pw, init, opts, draws);
    CHECK(r.trace.iterations == 1);
    CHECK(r.trace.rows.size() == 4);
  }
  SUBCASE("infeasible start is rejected") {
    auto bad = init;
    bad.A *= 2.0;
    AoOptions opts;
    channel::Rng draws(5);
    CHECK_THROWS_AS(optimize(cc, pw, bad, opts, draws), std::invalid_argument);
  }
}
