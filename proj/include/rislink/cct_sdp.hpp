// SPDX-License-Identifier: Apache-2.0
//
// High-performance alternating optimization: the relay beamformer and both
// slot phase vectors are lifted to PSD matrices, each fractional subproblem
// is turned into an SDP with a Charnes-Cooper scaling variable, and rank-one
// iterates are recovered by Gaussian randomization.

#pragma once

#include <functional>

#include "rislink/ao.hpp"

namespace rislink::cct {

using channel::CompositeChannels;
using channel::Rng;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using sysmodel::PowerConfig;
using sysmodel::SolutionState;

// For a = vec(A) and rank-one V1 = v1 v1^H, V2 = v2 v2^H:
//   a^H B a = gamma_s |v2^H H_rid A H_sir v1|^2
//   a^H C a = ||v2^H H_rid A||^2
//   a^H D a = gamma_s ||A H_sir v1||^2
struct LiftedMatrices {
  ComplexMatrix B;
  ComplexMatrix C;
  ComplexMatrix D;
};

LiftedMatrices build_bcd(const CompositeChannels& cc, const ComplexMatrix& V1, const ComplexMatrix& V2,
                         const PowerConfig& pw);

struct ASubproblem {
  conic::Status status = conic::Status::NumericalFailure;
  ComplexMatrix A_bar;  // M^2 x M^2, = A_tilde / m
  double m = 0.0;
  double sdr_value = 0.0;  // tr(B A_tilde)
};

// max tr(B At) s.t. tr(C At) + m = 1, tr((D + I) At) <= m gamma_r, At >= 0.
ASubproblem solve_a_subproblem(const CompositeChannels& cc, const ComplexMatrix& V1, const ComplexMatrix& V2,
                               const PowerConfig& pw, const conic::SolverSettings& settings = {});

struct V1Subproblem {
  conic::Status status = conic::Status::NumericalFailure;
  ComplexMatrix V1;
  double sdp_value = 0.0;
};

V1Subproblem solve_v1_subproblem(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexMatrix& V2,
                                 const PowerConfig& pw, const conic::SolverSettings& settings = {});

struct V2Subproblem {
  conic::Status status = conic::Status::NumericalFailure;
  ComplexMatrix V2;  // = V2_tilde / p
  double p = 0.0;
  double sdr_value = 0.0;
};

V2Subproblem solve_v2_subproblem(const CompositeChannels& cc, const ComplexMatrix& A, const ComplexMatrix& V1,
                                 const PowerConfig& pw, const conic::SolverSettings& settings = {});

// ---------------------------------------------------------------------------
// Gaussian randomization

enum class RecoveryKind {
  UnitModulusAnchored,  // entrywise unit modulus, last entry rotated to 1
  PowerFeasible,        // scaled down until xi^H Q xi <= budget
};

struct RecoveryContext {
  // True (unlifted) objective of a feasible candidate; larger is better.
  std::function<double(const ComplexVector&)> objective;
  ComplexMatrix power_matrix;  // PowerFeasible only
  double power_budget = 0.0;   // PowerFeasible only
};

struct Recovery {
  bool found = false;
  ComplexVector vector;
  double objective = 0.0;
  int winner = -1;  // 0 = principal eigenvector candidate, k = k-th draw
};

// Candidates: sqrt(lambda_max) u_max first, then `trials` draws xi ~ CN(0, X).
// Each is mapped to the feasible set and scored; the first maximum wins.
Recovery gaussian_randomize_vector(const ComplexMatrix& X, RecoveryKind kind, const RecoveryContext& ctx, int trials,
                                   Rng& rng);

// ---------------------------------------------------------------------------

AoResult optimize(const CompositeChannels& cc, const PowerConfig& pw, const SolutionState& init,
                        const AoOptions& opts, Rng& rng);

}  // namespace rislink::cct
