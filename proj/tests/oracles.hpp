// SPDX-License-Identifier: Apache-2.0
//
// Reference computations for the tests. Everything here works from the raw
// per-link channels and explicit loops, without the composite-channel or
// lifted forms used by the library.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "rislink/channel.hpp"
#include "rislink/sysmodel.hpp"

namespace oracle {

using cd = std::complex<double>;
using rislink::linalg::ComplexMatrix;
using rislink::linalg::ComplexVector;

inline ComplexMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double var = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cd(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix g = random_complex(rng, n, n);
  return (g + g.adjoint()) / 2.0;
}

inline ComplexMatrix random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  const ComplexMatrix g = random_complex(rng, n, rank);
  return g * g.adjoint();
}

// Unit-variance channels of every link.
inline rislink::channel::ChannelSet unit_channels(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  rislink::channel::ChannelSet ch;
  ch.h_sr = random_complex(rng, m, 1).col(0);
  ch.h_si = random_complex(rng, n, 1).col(0);
  ch.H_ir = random_complex(rng, m, n);
  ch.h_rd = random_complex(rng, m, 1).col(0);
  ch.h_id = random_complex(rng, n, 1).col(0);
  return ch;
}

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(n);
  for (auto& x : out) x = u(rng);
  return out;
}

// Anchored phase vectors as used by the optimizer. Slot 2 stores the
// conjugated reflection phases.
inline ComplexVector slot1_vector(const std::vector<double>& theta) {
  ComplexVector v(static_cast<Eigen::Index>(theta.size()) + 1);
  for (std::size_t i = 0; i < theta.size(); ++i) v(static_cast<Eigen::Index>(i)) = std::polar(1.0, theta[i]);
  v(v.size() - 1) = 1.0;
  return v;
}

inline ComplexVector slot2_vector(const std::vector<double>& theta) {
  ComplexVector v(static_cast<Eigen::Index>(theta.size()) + 1);
  for (std::size_t i = 0; i < theta.size(); ++i) v(static_cast<Eigen::Index>(i)) = std::polar(1.0, -theta[i]);
  v(v.size() - 1) = 1.0;
  return v;
}

// Effective relay input channel h_sr + H_ir diag(e^{j theta1}) h_si, entry by entry.
inline ComplexVector relay_input(const rislink::channel::ChannelSet& ch, const std::vector<double>& theta1) {
  ComplexVector g = ch.h_sr;
  for (Eigen::Index r = 0; r < g.size(); ++r)
    for (Eigen::Index i = 0; i < ch.h_si.size(); ++i)
      g(r) += ch.H_ir(r, i) * std::polar(1.0, theta1[static_cast<std::size_t>(i)]) * ch.h_si(i);
  return g;
}

// Row vector h_rd^H + h_id^H diag(e^{j theta2}) H_ir^H, entry by entry.
inline ComplexVector relay_output_row(const rislink::channel::ChannelSet& ch, const std::vector<double>& theta2) {
  ComplexVector w(ch.h_rd.size());
  for (Eigen::Index c = 0; c < w.size(); ++c) {
    cd acc = std::conj(ch.h_rd(c));
    for (Eigen::Index i = 0; i < ch.h_id.size(); ++i)
      acc += std::conj(ch.h_id(i)) * std::polar(1.0, theta2[static_cast<std::size_t>(i)]) * std::conj(ch.H_ir(c, i));
    w(c) = acc;
  }
  return w;
}

// Received-signal SNR in physical units: Ps |w A g|^2 / (sigma2 ||w A||^2 + sigma2).
inline double raw_snr(const rislink::channel::ChannelSet& ch, const std::vector<double>& theta1,
                      const std::vector<double>& theta2, const ComplexMatrix& A, double ps_mw, double sigma2_mw) {
  const ComplexVector g = relay_input(ch, theta1);
  const ComplexVector w = relay_output_row(ch, theta2);
  cd signal = 0.0;
  double noise = 0.0;
  for (Eigen::Index c = 0; c < A.cols(); ++c) {
    cd wa = 0.0;
    for (Eigen::Index r = 0; r < A.rows(); ++r) wa += w(r) * A(r, c);
    signal += wa * g(c);
    noise += std::norm(wa);
  }
  return ps_mw * std::norm(signal) / (sigma2_mw * noise + sigma2_mw);
}

// Ps ||A g||^2 + ||A||_F^2 sigma2, in mW.
inline double raw_relay_power(const rislink::channel::ChannelSet& ch, const std::vector<double>& theta1,
                              const ComplexMatrix& A, double ps_mw, double sigma2_mw) {
  const ComplexVector g = relay_input(ch, theta1);
  double sig = 0.0, fro = 0.0;
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    cd acc = 0.0;
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      acc += A(r, c) * g(c);
      fro += std::norm(A(r, c));
    }
    sig += std::norm(acc);
  }
  return ps_mw * sig + fro * sigma2_mw;
}

// max over t in [0, tmax] of b t / (c t + 1) for b, c >= 0: the fraction is
// nondecreasing in t, so the maximum sits at tmax.
inline double scalar_fraction_max(double b, double c, double d, double gamma_r) {
  const double tmax = gamma_r / (d + 1.0);
  return b * tmax / (c * tmax + 1.0);
}

// Single relay antenna, single RIS element: exhaustive search over both
// reflection phases on a uniform grid, with the relay gain set to its
// analytic optimum (full power) at each grid point.
struct GridOptimum {
  double snr = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

inline GridOptimum grid_search_single(const rislink::channel::ChannelSet& ch, double gamma_s, double gamma_r,
                                      int points = 72) {
  GridOptimum best;
  for (int i = 0; i < points; ++i) {
    const double t1 = 2.0 * std::numbers::pi * i / points;
    const cd g = ch.h_sr(0) + ch.H_ir(0, 0) * std::polar(1.0, t1) * ch.h_si(0);
    for (int k = 0; k < points; ++k) {
      const double t2 = 2.0 * std::numbers::pi * k / points;
      const cd w = std::conj(ch.h_rd(0)) + std::conj(ch.h_id(0)) * std::polar(1.0, t2) * std::conj(ch.H_ir(0, 0));
      // |a|^2 = t:  gamma_s |w|^2 |g|^2 t / (|w|^2 t + 1),  t (gamma_s |g|^2 + 1) <= gamma_r
      const double value = scalar_fraction_max(gamma_s * std::norm(w) * std::norm(g), std::norm(w),
                                               gamma_s * std::norm(g), gamma_r);
      if (value > best.snr) best = {value, t1, t2};
    }
  }
  return best;
}

}  // namespace oracle
