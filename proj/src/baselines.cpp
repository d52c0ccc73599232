// SPDX-License-Identifier: Apache-2.0

#include "rislink/baselines.hpp"

#include "rislink/dt_sca.hpp"

namespace rislink::baselines {

CompositeChannels strip_ris(const CompositeChannels& cc) {
  CompositeChannels out = cc;
  const auto n = cc.ris_elements();
  out.H_sir.leftCols(n).setZero();
  out.H_rid.topRows(n).setZero();
  return out;
}

BaselineResult optimize_relay(const CompositeChannels& cc, const PowerConfig& pw, const linalg::ComplexVector& v1,
                              const linalg::ComplexVector& v2, const conic::SolverSettings& settings) {
  const auto m = cc.relay_antennas();
  BaselineResult out;
  out.state.v1 = v1;
  out.state.v2 = v2;
  out.state.A = sysmodel::scale_to_budget(linalg::ComplexMatrix::Identity(m, m), v1, cc, pw);
  const double start = sysmodel::snr(out.state, cc, pw);

  const dt::DinkelbachResult dk = dt::solve_a_dt(cc, v1, v2, pw, linalg::vec(out.state.A), {}, settings);
  out.status = dk.status;
  if (dk.status == conic::Status::Optimal) {
    SolutionState cand{linalg::unvec(dk.a, m, m), v1, v2};
    if (sysmodel::snr(cand, cc, pw) >= start && sysmodel::is_power_feasible(cand, cc, pw)) out.state = cand;
  }
  out.snr = sysmodel::snr(out.state, cc, pw);
  out.rate = sysmodel::rate(out.snr);
  return out;
}

BaselineResult baseline_random_phase(const CompositeChannels& cc, const PowerConfig& pw,
                                     const linalg::ComplexVector& v1, const linalg::ComplexVector& v2,
                                     const conic::SolverSettings& settings) {
  return optimize_relay(cc, pw, v1, v2, settings);
}

BaselineResult baseline_random_phase(const CompositeChannels& cc, const PowerConfig& pw, channel::Rng& rng,
                                     const conic::SolverSettings& settings) {
  const auto n = cc.ris_elements();
  const linalg::ComplexVector v1 = sysmodel::random_anchored_phases(n, rng);
  const linalg::ComplexVector v2 = sysmodel::random_anchored_phases(n, rng);
  return optimize_relay(cc, pw, v1, v2, settings);
}

BaselineResult baseline_no_ris(const CompositeChannels& cc, const PowerConfig& pw,
                               const conic::SolverSettings& settings) {
  const auto ones = linalg::ComplexVector::Ones(cc.ris_elements() + 1);
  return optimize_relay(strip_ris(cc), pw, ones, ones, settings);
}

}  // namespace rislink::baselines
