// SPDX-License-Identifier: Apache-2.0
//
// Closed-form operation counts of the two alternating-optimization methods,
// assuming an interior-point solve per subproblem at accuracy eps.

#pragma once

#include <vector>

namespace rislink::flops {

// Per-subproblem variable counts of the lifted method.
struct LiftedSizes {
  double n_a = 0.0;   // M^4 + 1
  double n_v1 = 0.0;  // (N+1)^2
  double n_v2 = 0.0;  // (N+1)^2 + 1
};

LiftedSizes lifted_sizes(int m, int n);

// L1 * [ n_A sqrt(M^2+3) (M^6 + 3 + n_A (M^4+3) + n_A^2)
//      + n_V1 sqrt(2N+3) ((N+1)^3 + N + 2 + n_V1 ((N+1)^2 + N + 2) + n_V1^2)
//      + n_V2 sqrt(2N+4) ((N+1)^3 + N + 3 + n_V2 ((N+1)^2 + N + 3) + n_V2^2) ] ln(1/eps)
double flops_cct(int m, int n, double l1, const LiftedSizes& sizes, double eps);
double flops_cct(int m, int n, double l1, double eps);

// L2 * [ n_a sqrt(2) (M^4 + n_a^2)
//      + n_v1 sqrt(2N+3) (n_v1 + N + 1 + (N+2)^2 + n_v1^2)
//      + n_v2 sqrt(2N+1) (n_v2 + N + 1 + n_v2^2) ] ln(1/eps),
// with n_a = M^2 and n_v1 = n_v2 = N + 1.
double flops_dtsca(int m, int n, double l2, double eps);

struct FlopsRow {
  int m = 0;
  int n = 0;
  double cct = 0.0;
  double dtsca = 0.0;
};

// Rows for every N in ns at fixed M.
std::vector<FlopsRow> flops_curve(int m, const std::vector<int>& ns, double l1, double l2, double eps);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rislink::flops
