// SPDX-License-Identifier: Apache-2.0

#include "rislink/sysmodel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rislink::sysmodel {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (!(mw > 0.0)) throw std::invalid_argument("mw_to_dbm: power must be positive");
  return 10.0 * std::log10(mw);
}

bool is_anchored_unit_modulus(const ComplexVector& v, double tol) {
  if (v.size() < 1 || v(v.size() - 1) != linalg::Complex(1.0, 0.0)) return false;
  for (Eigen::Index i = 0; i + 1 < v.size(); ++i) {
    if (std::abs(std::abs(v(i)) - 1.0) > tol) return false;
  }
  return true;
}

ComplexVector project_anchored(const ComplexVector& v) {
  const Eigen::Index n = v.size();
  const linalg::Complex anchor = v(n - 1);
  const double anchor_phase = std::abs(anchor) > 0.0 ? std::arg(anchor) : 0.0;
  ComplexVector out(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double phase = std::abs(v(i)) > 0.0 ? std::arg(v(i)) - anchor_phase : 0.0;
    out(i) = std::polar(1.0, phase);
  }
  out(n - 1) = 1.0;
  return out;
}

double snr(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw) {
  const Eigen::RowVectorXcd second_hop = st.v2.adjoint() * cc.H_rid * st.A;
  const linalg::Complex signal = second_hop * (cc.H_sir * st.v1);
  return pw.gamma_s() * std::norm(signal) / (second_hop.squaredNorm() + 1.0);
}

double rate(double snr_value) {
  if (snr_value < 0.0) throw std::invalid_argument("rate: SNR must be nonnegative");
  return 0.5 * std::log2(1.0 + snr_value);
}

double relay_power_lhs(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw) {
  return pw.gamma_s() * (st.A * (cc.H_sir * st.v1)).squaredNorm() + st.A.squaredNorm();
}

bool is_power_feasible(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw,
                       double rel_slack) {
  return relay_power_lhs(st, cc, pw) <= pw.gamma_r() * (1.0 + rel_slack);
}

double power_rescale_factor(const SolutionState& st, const CompositeChannels& cc, const PowerConfig& pw) {
  const double lhs = relay_power_lhs(st, cc, pw);
  if (lhs <= pw.gamma_r()) return 1.0;
  return std::sqrt(pw.gamma_r() / lhs);
}

ComplexMatrix scale_to_budget(const ComplexMatrix& A, const ComplexVector& v1, const CompositeChannels& cc,
                              const PowerConfig& pw) {
  const double lhs = relay_power_lhs({A, v1, v1}, cc, pw);
  if (!(lhs > 0.0)) return A;
  return std::sqrt(pw.gamma_r() / lhs) * A;
}

ComplexVector random_anchored_phases(Eigen::Index ris_elements, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  ComplexVector v(ris_elements + 1);
  for (Eigen::Index i = 0; i < ris_elements; ++i) v(i) = std::polar(1.0, uniform(rng));
  v(ris_elements) = 1.0;
  return v;
}

SolutionState initial_state(const CompositeChannels& cc, const PowerConfig& pw, Rng& rng) {
  const auto m = cc.relay_antennas();
  const auto n = cc.ris_elements();
  SolutionState st;
  st.v1 = random_anchored_phases(n, rng);
  st.v2 = random_anchored_phases(n, rng);
  st.A = scale_to_budget(ComplexMatrix::Identity(m, m), st.v1, cc, pw);
  return st;
}

}  // namespace rislink::sysmodel
