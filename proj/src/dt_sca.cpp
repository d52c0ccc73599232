// SPDX-License-Identifier: Apache-2.0

#include "rislink/dt_sca.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rislink::dt {

namespace {

using conic::Status;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_phase_length(const CompositeChannels& cc, const ComplexVector& v, const char* what) {
  if (v.size() != cc.H_sir.cols() || cc.H_rid.rows() != cc.H_sir.cols() || cc.H_rid.cols() != cc.H_sir.rows()) {
    throw std::invalid_argument(std::string("dt: dimension mismatch in ") + what);
  }
}

}  // namespace

VectorMatrices build_bcd_bar(const CompositeChannels& cc, const ComplexVector& v1, const ComplexVector& v2,
                             const PowerConfig& pw) {
  check_phase_length(cc, v1, "v1");
  check_phase_length(cc, v2, "v2");
  const auto m = cc.relay_antennas();
  const ComplexVector x = cc.H_sir * v1;               // relay receive direction
  const ComplexVector y = cc.H_rid.adjoint() * v2;     // relay transmit direction
  const ComplexMatrix xx = x.conjugate() * x.transpose();
  const ComplexMatrix yy = y * y.adjoint();
  VectorMatrices out;
  out.B = linalg::hermitian_part(pw.gamma_s() * linalg::kron(xx, yy));
  out.C = linalg::hermitian_part(linalg::kron(ComplexMatrix::Identity(m, m), yy));
  out.D = linalg::hermitian_part(pw.gamma_s() * linalg::kron(xx, ComplexMatrix::Identity(m, m)));
  return out;
}

double dinkelbach_update(const ComplexVector& a, const ComplexMatrix& B, const ComplexMatrix& C) {
  return linalg::quad_form(B, a) / (linalg::quad_form(C, a) + 1.0);
}

AStep dinkelbach_a_step(const VectorMatrices& bcd, double mu, const ComplexVector& a_tilde, double gamma_r,
                        const conic::SolverSettings& settings) {
  if (mu < 0.0) throw std::invalid_argument("dinkelbach_a_step: mu must be nonnegative");
  const Eigen::Index n = bcd.B.rows();
  if (a_tilde.size() != n) throw std::invalid_argument("dinkelbach_a_step: expansion point has wrong size");

  // Solved in whitened coordinates a = sqrt(gamma_r) W c, W = (D + I)^(-1/2),
  // where the power constraint becomes ||c||^2 <= 1.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(bcd.D);
  const linalg::RealVector scale = (es.eigenvalues().array().max(0.0) + 1.0).rsqrt();
  const ComplexMatrix w = es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().adjoint();
  const double root = std::sqrt(gamma_r);

  conic::ConvexQp qp;
  qp.dim = n;
  qp.q = root * w * (bcd.B * a_tilde);
  qp.P = linalg::hermitian_part(mu * gamma_r * w * bcd.C * w);
  qp.constant = -linalg::quad_form(bcd.B, a_tilde) - mu;
  qp.constraints.push_back({ComplexMatrix::Identity(n, n), ComplexVector::Zero(n), 1.0});

  const conic::ConicSolution sol = conic::solve_qp(qp, settings);
  AStep out;
  out.status = sol.status;
  if (sol.status != Status::Optimal) return out;
  out.a = root * w * sol.vector;
  out.objective = qp.objective_at(sol.vector);
  return out;
}

DinkelbachResult solve_a_dt(const CompositeChannels& cc, const ComplexVector& v1, const ComplexVector& v2,
                            const PowerConfig& pw, const ComplexVector& a0, const DinkelbachOptions& opts,
                            const conic::SolverSettings& settings) {
  const VectorMatrices bcd = build_bcd_bar(cc, v1, v2, pw);
  if (a0.size() != bcd.B.rows()) throw std::invalid_argument("solve_a_dt: initial point has wrong size");

  DinkelbachResult res;
  res.a = a0;
  res.mu.push_back(dinkelbach_update(a0, bcd.B, bcd.C));
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const AStep step = dinkelbach_a_step(bcd, res.mu.back(), res.a, pw.gamma_r(), settings);
    res.iterations = it;
    if (step.status != Status::Optimal) {
      res.status = step.status;
      break;
    }
    const double mu = dinkelbach_update(step.a, bcd.B, bcd.C);
    // A regression can only come from solver round-off; keep the incumbent,
    // whose level is then unchanged.
    if (mu < res.mu.back()) {
      res.rejected_drop = res.mu.back() - mu;
      res.mu.push_back(res.mu.back());
      res.converged = true;
      break;
    }
    const double delta = mu - res.mu.back();
    res.a = step.a;
    res.mu.push_back(mu);
    if (delta <= opts.tolerance) {
      res.converged = true;
      break;
    }
  }
  return res;
}

V1Step solve_v1_sca(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexVector& v2,
                    const PowerConfig& pw, const ComplexVector& v1_tilde, const conic::SolverSettings& settings) {
  check_phase_length(cc, v2, "v2");
  check_phase_length(cc, v1_tilde, "v1");
  const Eigen::Index n1 = v1_tilde.size();
  const ComplexVector w = cc.H_sir.adjoint() * A.adjoint() * cc.H_rid.adjoint() * v2;
  const ComplexMatrix E = linalg::hermitian_part(pw.gamma_s() * w * w.adjoint());
  const ComplexMatrix relay_in = A * cc.H_sir;
  const ComplexMatrix F = linalg::hermitian_part(pw.gamma_s() * relay_in.adjoint() * relay_in);

  V1Step out;
  const double budget = pw.gamma_r() - A.squaredNorm();
  if (!(budget > 0.0)) {
    out.status = Status::Infeasible;
    return out;
  }
  conic::ConvexQp qp;
  qp.dim = n1;
  qp.q = E * v1_tilde;
  qp.constant = -linalg::quad_form(E, v1_tilde);
  qp.constraints.push_back({F, ComplexVector::Zero(n1), budget});
  qp.fixed.emplace_back(n1 - 1, linalg::Complex(1.0, 0.0));
  for (Eigen::Index i = 0; i + 1 < n1; ++i) qp.modulus_bounded.push_back(i);

  const conic::ConicSolution sol = conic::solve_qp(qp, settings);
  out.status = sol.status;
  if (sol.status != Status::Optimal) return out;
  out.relaxed = sol.vector;
  out.objective = qp.objective_at(sol.vector);
  out.v1 = sysmodel::project_anchored(sol.vector);
  SolutionState st{A, out.v1, v2};
  out.A = A * sysmodel::power_rescale_factor(st, cc, pw);
  return out;
}

MinorantV2 build_minorant_v2(const ComplexMatrix& G, const ComplexMatrix& J, const ComplexVector& v_tilde) {
  const Eigen::Index n = v_tilde.size();
  if (G.rows() != n || G.cols() != n || J.rows() != n || J.cols() != n) {
    throw std::invalid_argument("build_minorant_v2: dimension mismatch");
  }
  const double c = linalg::quad_form(J, v_tilde);
  if (!(c > 0.0)) throw std::runtime_error("build_minorant_v2: denominator is not positive");
  const double s = linalg::quad_form(G, v_tilde);
  const double lambda = linalg::lambda_max(J);
  MinorantV2 out;
  out.expansion = v_tilde;
  const ComplexMatrix shifted = J - lambda * ComplexMatrix::Identity(n, n);
  out.g = G * v_tilde / c - shifted * v_tilde * (s / (c * c));
  out.d = -(2.0 * lambda * static_cast<double>(n) - c) * s / (c * c);
  return out;
}

void build_gj(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexVector& v1, const PowerConfig& pw,
              ComplexMatrix& G, ComplexMatrix& J) {
  check_phase_length(cc, v1, "v1");
  const Eigen::Index n1 = cc.H_rid.rows();
  const ComplexVector u = cc.H_rid * A * cc.H_sir * v1;
  const ComplexMatrix noise = cc.H_rid * A;
  G = linalg::hermitian_part(pw.gamma_s() * u * u.adjoint());
  J = linalg::hermitian_part(noise * noise.adjoint()) +
      ComplexMatrix::Identity(n1, n1) / static_cast<double>(n1);
}

V2Step solve_v2_sca(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexVector& v1,
                    const PowerConfig& pw, const ComplexVector& v2_tilde, const conic::SolverSettings& settings) {
  check_phase_length(cc, v2_tilde, "v2");
  ComplexMatrix G, J;
  build_gj(cc, A, v1, pw, G, J);
  const MinorantV2 mv = build_minorant_v2(G, J, v2_tilde);
  const Eigen::Index n1 = v2_tilde.size();

  V2Step out;
  if (mv.g.head(n1 - 1).cwiseAbs().maxCoeff() == 0.0) {
    out.status = Status::Optimal;
    out.v2 = v2_tilde;
    out.objective = mv.value_at(v2_tilde);
    out.retained = true;
    return out;
  }
  conic::ConvexQp qp;
  qp.dim = n1;
  qp.q = mv.g;
  qp.constant = mv.d;
  qp.fixed.emplace_back(n1 - 1, linalg::Complex(1.0, 0.0));
  for (Eigen::Index i = 0; i + 1 < n1; ++i) qp.modulus_bounded.push_back(i);

  const conic::ConicSolution sol = conic::solve_qp(qp, settings);
  out.status = sol.status;
  if (sol.status != Status::Optimal) return out;
  out.objective = qp.objective_at(sol.vector);
  out.v2 = sysmodel::project_anchored(sol.vector);
  const double before = sysmodel::snr({A, v1, v2_tilde}, cc, pw);
  const double after = sysmodel::snr({A, v1, out.v2}, cc, pw);
  if (after < before - 1e-8 * std::max(1.0, before)) {
    out.v2 = v2_tilde;
    out.retained = true;
  }
  return out;
}

AoResult optimize(const CompositeChannels& cc, const PowerConfig& pw, const SolutionState& init,
                        const AoOptions& opts, const DinkelbachOptions& inner) {
  if (!sysmodel::is_anchored_unit_modulus(init.v1) || !sysmodel::is_anchored_unit_modulus(init.v2)) {
    throw std::invalid_argument("dt::optimize: initial phases must be unit-modulus and anchored");
  }
  if (!sysmodel::is_power_feasible(init, cc, pw)) {
    throw std::invalid_argument("dt::optimize: initial state violates the relay power budget");
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
  auto try_accept = [&](const SolutionState& cand, double& value) {
    value = sysmodel::snr(cand, cc, pw);
    if (value < current || !sysmodel::is_power_feasible(cand, cc, pw)) return false;
    res.state = cand;
    current = value;
    return true;
  };

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    {
      const auto t0 = std::chrono::steady_clock::now();
      const DinkelbachResult dk =
          solve_a_dt(cc, res.state.v1, res.state.v2, pw, linalg::vec(res.state.A), inner, opts.solver);
      double value = 0.0;
      bool accepted = false;
      if (dk.status == Status::Optimal) {
        accepted = try_accept({linalg::unvec(dk.a, m, m), res.state.v1, res.state.v2}, value);
      }
      record(iter, "A", dk.status, dk.mu.back(), value, accepted, t0);
    }
    {
      const auto t0 = std::chrono::steady_clock::now();
      const V1Step step = solve_v1_sca(cc, res.state.A, res.state.v2, pw, res.state.v1, opts.solver);
      double value = 0.0;
      bool accepted = false;
      if (step.status == Status::Optimal) accepted = try_accept({step.A, step.v1, res.state.v2}, value);
      record(iter, "v1", step.status, step.objective, value, accepted, t0);
    }
    {
      const auto t0 = std::chrono::steady_clock::now();
      const V2Step step = solve_v2_sca(cc, res.state.A, res.state.v1, pw, res.state.v2, opts.solver);
      double value = 0.0;
      bool accepted = false;
      if (step.status == Status::Optimal) accepted = try_accept({res.state.A, res.state.v1, step.v2}, value);
      record(iter, "v2", step.status, step.objective, value, accepted, t0);
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

}  // namespace rislink::dt
