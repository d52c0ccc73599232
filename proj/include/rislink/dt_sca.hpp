// SPDX-License-Identifier: Apache-2.0
//
// Low-complexity alternating optimization over a = vec(A), v1 and v2. The
// relay step runs Dinkelbach iterations on a linearized fractional objective;
// the phase steps maximize first-order minorants over the relaxed modulus
// set and project back to unit modulus.

#pragma once

#include <vector>

#include "rislink/ao.hpp"

namespace rislink::dt {

using channel::CompositeChannels;
using channel::Rng;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using sysmodel::PowerConfig;
using sysmodel::SolutionState;

// Rank-one counterparts of the lifted matrices; for a = vec(A):
//   a^H B a = gamma_s |v2^H H_rid A H_sir v1|^2
//   a^H C a = ||v2^H H_rid A||^2
//   a^H D a = gamma_s ||A H_sir v1||^2
struct VectorMatrices {
  ComplexMatrix B;
  ComplexMatrix C;
  ComplexMatrix D;
};

VectorMatrices build_bcd_bar(const CompositeChannels& cc, const ComplexVector& v1, const ComplexVector& v2,
                             const PowerConfig& pw);

// a^H B a / (a^H C a + 1)
double dinkelbach_update(const ComplexVector& a, const ComplexMatrix& B, const ComplexMatrix& C);

struct AStep {
  conic::Status status = conic::Status::NumericalFailure;
  ComplexVector a;
  double objective = 0.0;  // 2 Re{a^H B a~} - a~^H B a~ - mu (a^H C a + 1)
};

// maximize 2 Re{a^H B a~} - a~^H B a~ - mu (a^H C a + 1)  s.t.  a^H (D + I) a <= gamma_r
AStep dinkelbach_a_step(const VectorMatrices& bcd, double mu, const ComplexVector& a_tilde, double gamma_r,
                        const conic::SolverSettings& settings = {});

struct DinkelbachOptions {
  double tolerance = 1e-6;  // on |mu(t+1) - mu(t)|
  int max_iterations = 20;
};

struct DinkelbachResult {
  conic::Status status = conic::Status::Optimal;
  ComplexVector a;
  std::vector<double> mu;  // mu[0] at the initial point
  int iterations = 0;
  bool converged = false;
  double rejected_drop = 0.0;  // > 0 if a step lowered mu and was discarded
};

DinkelbachResult solve_a_dt(const CompositeChannels& cc, const ComplexVector& v1, const ComplexVector& v2,
                            const PowerConfig& pw, const ComplexVector& a0, const DinkelbachOptions& opts = {},
                            const conic::SolverSettings& settings = {});

struct V1Step {
  conic::Status status = conic::Status::NumericalFailure;
  ComplexVector v1;      // projected, anchored
  ComplexMatrix A;       // input A shrunk if the projected v1 overloads the relay
  ComplexVector relaxed; // convex solution before projection
  double objective = 0.0;
};

V1Step solve_v1_sca(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexVector& v2,
                    const PowerConfig& pw, const ComplexVector& v1_tilde, const conic::SolverSettings& settings = {});

// Linear minorant 2 Re{g^H v} + d of (v^H G v) / (v^H J v) around v~, valid
// on unit-modulus vectors of length n (where v^H v = n).
struct MinorantV2 {
  ComplexVector g;
  double d = 0.0;
  ComplexVector expansion;

  double value_at(const ComplexVector& v) const { return 2.0 * g.dot(v).real() + d; }
};

MinorantV2 build_minorant_v2(const ComplexMatrix& G, const ComplexMatrix& J, const ComplexVector& v_tilde);

// G = gamma_s H_rid A H_sir v1 v1^H H_sir^H A^H H_rid^H,
// J = H_rid A A^H H_rid^H + I / (N + 1)
void build_gj(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexVector& v1, const PowerConfig& pw,
              ComplexMatrix& G, ComplexMatrix& J);

struct V2Step {
  conic::Status status = conic::Status::NumericalFailure;
  ComplexVector v2;
  double objective = 0.0;  // minorant optimum
  bool retained = false;   // expansion point kept (no ascent direction or regression)
};

V2Step solve_v2_sca(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexVector& v1,
                    const PowerConfig& pw, const ComplexVector& v2_tilde, const conic::SolverSettings& settings = {});

AoResult optimize(const CompositeChannels& cc, const PowerConfig& pw, const SolutionState& init,
                        const AoOptions& opts, const DinkelbachOptions& inner = {});

}  // namespace rislink::dt
