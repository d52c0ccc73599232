// SPDX-License-Identifier: Apache-2.0
//
// End-to-end SNR, achievable rate and relay power of the two-slot
// RIS-aided amplify-and-forward link, evaluated on composite channels.

#pragma once

#include "rislink/channel.hpp"

namespace rislink::sysmodel {

using channel::CompositeChannels;
using channel::Rng;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

inline constexpr double kUnitModulusTol = 1e-9;
inline constexpr double kPowerSlack = 1e-6;

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

struct PowerConfig {
  double ps_dbm = 30.0;
  double pr_dbm = 30.0;
  double sigma2_dbm = -90.0;

  double gamma_s() const { return dbm_to_mw(ps_dbm) / dbm_to_mw(sigma2_dbm); }
  double gamma_r() const { return dbm_to_mw(pr_dbm) / dbm_to_mw(sigma2_dbm); }
};

// Relay beamformer A (M x M) and the anchored phase vectors of the two slots
// (length N+1, unit modulus, last entry exactly 1). v2 holds the literal
// optimization variable, i.e. v2(i) = exp(-j theta_2i).
struct SolutionState {
  ComplexMatrix A;
  ComplexVector v1;
  ComplexVector v2;
};

bool is_anchored_unit_modulus(const ComplexVector& v, double tol = kUnitModulusTol);

// exp(j angle(v / v(last))) entrywise; zero entries map to phase 0 and the
// last entry is set to exactly 1.
ComplexVector project_anchored(const ComplexVector& v);

// gamma_s |v2^H H_rid A H_sir v1|^2 / (||v2^H H_rid A||^2 + 1)
double snr(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw);

// 0.5 log2(1 + snr); throws for negative input.
double rate(double snr_value);

// gamma_s ||A H_sir v1||^2 + ||A||_F^2, compared against gamma_r.
double relay_power_lhs(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw);

bool is_power_feasible(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw,
                       double rel_slack = kPowerSlack);

// Largest factor c <= 1 such that c*A meets the power budget.
double power_rescale_factor(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw);

// Scales A (up or down) so the power constraint holds with equality.
ComplexMatrix scale_to_budget(const ComplexMatrix& A, const ComplexVector& v1, const CompositeChannels& cc,
                              const PowerConfig& pw);

ComplexVector random_anchored_phases(Eigen::Index ris_elements, Rng& rng);

// Random anchored phases and A = c I at full relay power.
SolutionState initial_state(const CompositeChannels& cc, const PowerConfig& pw, Rng& rng);

}  // namespace rislink::sysmodel
