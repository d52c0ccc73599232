// SPDX-License-Identifier: Apache-2.0

#include "rislink/cct_sdp.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rislink::cct {

namespace {

using conic::HermitianSdp;
using conic::Status;
using conic::TraceConstraint;
using linalg::RealVector;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_dims(const CompositeChannels& cc, const ComplexMatrix* V1, const ComplexMatrix* V2, const ComplexMatrix* A) {
  const auto m = cc.relay_antennas();
  const auto n1 = cc.ris_elements() + 1;
  if (cc.H_rid.rows() != n1 || cc.H_rid.cols() != m) throw std::invalid_argument("cct: composite channel mismatch");
  if (V1 && (V1->rows() != n1 || V1->cols() != n1)) throw std::invalid_argument("cct: V1 has wrong size");
  if (V2 && (V2->rows() != n1 || V2->cols() != n1)) throw std::invalid_argument("cct: V2 has wrong size");
  if (A && (A->rows() != m || A->cols() != m)) throw std::invalid_argument("cct: A has wrong size");
}

// (D + I)^(-1/2) for Hermitian PSD D.
ComplexMatrix inverse_sqrt_shifted(const ComplexMatrix& d) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(d));
  const RealVector scale = (es.eigenvalues().array().max(0.0) + 1.0).rsqrt();
  return es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix unit_diag(Eigen::Index n, Eigen::Index k) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(k, k) = 1.0;
  return e;
}

}  // namespace

LiftedMatrices build_bcd(const CompositeChannels& cc, const ComplexMatrix& V1, const ComplexMatrix& V2,
                         const PowerConfig& pw) {
  check_dims(cc, &V1, &V2, nullptr);
  const auto m = cc.relay_antennas();
  const ComplexMatrix first = cc.H_sir.conjugate() * V1.conjugate() * cc.H_sir.transpose();
  const ComplexMatrix second = cc.H_rid.adjoint() * V2 * cc.H_rid;
  const ComplexMatrix eye = ComplexMatrix::Identity(m, m);
  LiftedMatrices out;
  out.B = linalg::hermitian_part(pw.gamma_s() * linalg::kron(first, second));
  out.C = linalg::hermitian_part(linalg::kron(eye, second));
  out.D = linalg::hermitian_part(pw.gamma_s() * linalg::kron(first, eye));
  return out;
}

ASubproblem solve_a_subproblem(const CompositeChannels& cc, const ComplexMatrix& V1, const ComplexMatrix& V2,
                               const PowerConfig& pw, const conic::SolverSettings& settings) {
  const LiftedMatrices bcd = build_bcd(cc, V1, V2, pw);
  const double gamma_r = pw.gamma_r();
  const Eigen::Index n = bcd.B.rows();

  // Whitened variable Ah with At = gamma_r W Ah W, W = (D + I)^(-1/2), so the
  // power row reads tr(Ah) <= m.
  const ComplexMatrix w = inverse_sqrt_shifted(bcd.D);
  HermitianSdp sdp;
  sdp.dim = n;
  sdp.objective = linalg::hermitian_part(gamma_r * w * bcd.B * w);
  sdp.num_scalars = 1;  // m
  sdp.scalar_objective = RealVector::Zero(1);
  sdp.equalities.push_back({linalg::hermitian_part(gamma_r * w * bcd.C * w), RealVector::Ones(1), 1.0});
  sdp.inequalities.push_back({ComplexMatrix::Identity(n, n), RealVector::Constant(1, -1.0), 0.0});

  const conic::ConicSolution sol = conic::solve_sdp(sdp, settings);
  ASubproblem out;
  out.status = sol.status;
  if (sol.status != Status::Optimal) return out;
  out.m = sol.scalars(0);
  if (!(out.m > 1e-12)) {
    out.status = Status::NumericalFailure;
    return out;
  }
  const ComplexMatrix a_tilde = gamma_r * w * linalg::psd_projection(sol.matrix) * w;
  out.A_bar = linalg::hermitian_part(a_tilde / out.m);
  out.sdr_value = sol.objective;
  return out;
}

V1Subproblem solve_v1_subproblem(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexMatrix& V2,
                                 const PowerConfig& pw, const conic::SolverSettings& settings) {
  check_dims(cc, nullptr, &V2, &A);
  const Eigen::Index n1 = cc.H_sir.cols();
  const ComplexMatrix relay_out = cc.H_rid * A * cc.H_sir;  // (N+1) x (N+1)
  const ComplexMatrix relay_in = A * cc.H_sir;               // M x (N+1)

  HermitianSdp sdp;
  sdp.dim = n1;
  sdp.objective = linalg::hermitian_part(pw.gamma_s() * relay_out.adjoint() * V2 * relay_out);
  sdp.scalar_objective = RealVector(0);
  for (Eigen::Index k = 0; k < n1; ++k) sdp.equalities.push_back({unit_diag(n1, k), RealVector(0), 1.0});
  sdp.inequalities.push_back({linalg::hermitian_part(pw.gamma_s() * relay_in.adjoint() * relay_in), RealVector(0),
                              pw.gamma_r() - A.squaredNorm()});

  const conic::ConicSolution sol = conic::solve_sdp(sdp, settings);
  V1Subproblem out;
  out.status = sol.status;
  if (sol.status != Status::Optimal) return out;
  out.V1 = linalg::psd_projection(sol.matrix);
  out.sdp_value = sol.objective;
  return out;
}

V2Subproblem solve_v2_subproblem(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexMatrix& V1,
                                 const PowerConfig& pw, const conic::SolverSettings& settings) {
  check_dims(cc, &V1, nullptr, &A);
  const Eigen::Index n1 = cc.H_rid.rows();
  const ComplexMatrix forward = cc.H_rid * A * cc.H_sir;  // (N+1) x (N+1)
  const ComplexMatrix noise = cc.H_rid * A;               // (N+1) x M

  HermitianSdp sdp;
  sdp.dim = n1;
  sdp.objective = linalg::hermitian_part(pw.gamma_s() * forward * V1 * forward.adjoint());
  sdp.num_scalars = 1;  // p
  sdp.scalar_objective = RealVector::Zero(1);
  for (Eigen::Index k = 0; k < n1; ++k) {
    sdp.equalities.push_back({unit_diag(n1, k), RealVector::Constant(1, -1.0), 0.0});
  }
  sdp.equalities.push_back({linalg::hermitian_part(noise * noise.adjoint()), RealVector::Ones(1), 1.0});

  const conic::ConicSolution sol = conic::solve_sdp(sdp, settings);
  V2Subproblem out;
  out.status = sol.status;
  if (sol.status != Status::Optimal) return out;
  out.p = sol.scalars(0);
  if (!(out.p > 1e-12)) {
    out.status = Status::NumericalFailure;
    return out;
  }
  out.V2 = linalg::hermitian_part(linalg::psd_projection(sol.matrix) / out.p);
  out.sdr_value = sol.objective;
  return out;
}

AoResult optimize(const CompositeChannels& cc, const PowerConfig& pw, const SolutionState& init,
                        const AoOptions& opts, Rng& rng) {
  if (!sysmodel::is_anchored_unit_modulus(init.v1) || !sysmodel::is_anchored_unit_modulus(init.v2)) {
    throw std::invalid_argument("cct::optimize: initial phases must be unit-modulus and anchored");
  }
  if (!sysmodel::is_power_feasible(init, cc, pw)) {
    throw std::invalid_argument("cct::optimize: initial state violates the relay power budget");
  }
  const auto m = cc.relay_antennas();

  AoResult res{init, {}};
  double current = sysmodel::snr(res.state, cc, pw);
  res.trace.rates.push_back(sysmodel::rate(current));
  res.trace.rows.push_back({0, "init", current, current, true, res.trace.rates.back(), 0.0, Status::Optimal});

  auto record = [&](int iter, const char* name, Status status, double relaxed, double recovered, bool accepted,
                    std::chrono::steady_clock::time_point t0) {
    if (status != Status::Optimal) ++res.trace.solver_failures;
    res.trace.rows.push_back(
        {iter, name, relaxed, recovered, accepted, sysmodel::rate(current), seconds_since(t0), status});
  };

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    // Relay beamformer.
    {
      const auto t0 = std::chrono::steady_clock::now();
      const ComplexMatrix V1 = res.state.v1 * res.state.v1.adjoint();
      const ComplexMatrix V2 = res.state.v2 * res.state.v2.adjoint();
      const ASubproblem sub = solve_a_subproblem(cc, V1, V2, pw, opts.solver);
      double recovered = 0.0;
      bool accepted = false;
      if (sub.status == Status::Optimal) {
        const LiftedMatrices bcd = build_bcd(cc, V1, V2, pw);
        RecoveryContext ctx;
        ctx.power_matrix = bcd.D + ComplexMatrix::Identity(m * m, m * m);
        ctx.power_budget = pw.gamma_r();
        ctx.objective = [&](const ComplexVector& a) {
          return sysmodel::snr({linalg::unvec(a, m, m), res.state.v1, res.state.v2}, cc, pw);
        };
        const Recovery rec = gaussian_randomize_vector(sub.A_bar, RecoveryKind::PowerFeasible, ctx,
                                                       opts.randomizations, rng);
        if (rec.found) {
          recovered = rec.objective;
          if (rec.objective >= current) {
            res.state.A = linalg::unvec(rec.vector, m, m);
            current = rec.objective;
            accepted = true;
          }
        }
      }
      record(iter, "A", sub.status, sub.sdr_value, recovered, accepted, t0);
    }
    // Slot-1 phases; A is shrunk when a projected candidate overloads the relay.
    {
      const auto t0 = std::chrono::steady_clock::now();
      const ComplexMatrix V2 = res.state.v2 * res.state.v2.adjoint();
      const V1Subproblem sub = solve_v1_subproblem(cc, res.state.A, V2, pw, opts.solver);
      double recovered = 0.0;
      bool accepted = false;
      if (sub.status == Status::Optimal) {
        RecoveryContext ctx;
        ctx.objective = [&](const ComplexVector& v1) {
          SolutionState cand{res.state.A, v1, res.state.v2};
          cand.A *= sysmodel::power_rescale_factor(cand, cc, pw);
          return sysmodel::snr(cand, cc, pw);
        };
        const Recovery rec = gaussian_randomize_vector(sub.V1, RecoveryKind::UnitModulusAnchored, ctx,
                                                       opts.randomizations, rng);
        if (rec.found) {
          recovered = rec.objective;
          if (rec.objective >= current) {
            SolutionState cand{res.state.A, rec.vector, res.state.v2};
            cand.A *= sysmodel::power_rescale_factor(cand, cc, pw);
            res.state = std::move(cand);
            current = rec.objective;
            accepted = true;
          }
        }
      }
      record(iter, "v1", sub.status, sub.sdp_value, recovered, accepted, t0);
    }
    // Slot-2 phases.
    {
      const auto t0 = std::chrono::steady_clock::now();
      const ComplexMatrix V1 = res.state.v1 * res.state.v1.adjoint();
      const V2Subproblem sub = solve_v2_subproblem(cc, res.state.A, V1, pw, opts.solver);
      double recovered = 0.0;
      bool accepted = false;
      if (sub.status == Status::Optimal) {
        RecoveryContext ctx;
        ctx.objective = [&](const ComplexVector& v2) {
          return sysmodel::snr({res.state.A, res.state.v1, v2}, cc, pw);
        };
        const Recovery rec = gaussian_randomize_vector(sub.V2, RecoveryKind::UnitModulusAnchored, ctx,
                                                       opts.randomizations, rng);
        if (rec.found) {
          recovered = rec.objective;
          if (rec.objective >= current) {
            res.state.v2 = rec.vector;
            current = rec.objective;
            accepted = true;
          }
        }
      }
      record(iter, "v2", sub.status, sub.sdr_value, recovered, accepted, t0);
    }

    const double r = sysmodel::rate(current);
    const double prev = res.trace.rates.back();
    res.trace.rates.push_back(r);
    res.trace.iterations = iter;
    if (std::abs(r - prev) <= opts.tolerance) {
      res.trace.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace rislink::cct
