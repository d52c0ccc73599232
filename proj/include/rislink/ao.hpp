// SPDX-License-Identifier: Apache-2.0
//
// Options and traces shared by the two alternating-optimization methods.

#pragma once

#include <string>
#include <vector>

#include "rislink/conic.hpp"
#include "rislink/sysmodel.hpp"

namespace rislink {

struct AoOptions {
  double tolerance = 1e-3;  // stop when |R(t+1) - R(t)| <= tolerance, bits/s/Hz
  int max_iterations = 30;
  int randomizations = 50;  // Gaussian randomization draws (CCT-SDP only)
  conic::SolverSettings solver;
};

// One row per subproblem solve. `objective` is the relaxed (SDR / convex
// surrogate) optimum, `recovered` the true objective of the recovered
// candidate, and `rate` the incumbent rate after the accept/reject decision.
struct TraceRow {
  int iteration = 0;
  std::string subproblem;
  double objective = 0.0;
  double recovered = 0.0;
  bool accepted = false;
  double rate = 0.0;
  double seconds = 0.0;
  conic::Status status = conic::Status::Optimal;
};

struct AoTrace {
  std::vector<TraceRow> rows;
  std::vector<double> rates;  // rates[0] = initial state, rates[t] after outer iteration t
  int iterations = 0;
  bool converged = false;
  int solver_failures = 0;

  double best_rate() const { return rates.empty() ? 0.0 : rates.back(); }
};

struct AoResult {
  sysmodel::SolutionState state;
  AoTrace trace;
};

}  // namespace rislink
