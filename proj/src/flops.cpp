// SPDX-License-Identifier: Apache-2.0

#include "rislink/flops.hpp"

#include <cmath>
#include <stdexcept>

namespace rislink::flops {

namespace {

void check_args(int m, int n, double eps) {
  if (m < 1 || n < 1) throw std::invalid_argument("flops: M and N must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("flops: eps must lie in (0, 1)");
}

}  // namespace

LiftedSizes lifted_sizes(int m, int n) {
  const double mm = m, n1 = n + 1.0;
  return {std::pow(mm, 4) + 1.0, n1 * n1, n1 * n1 + 1.0};
}

double flops_cct(int m, int n, double l1, const LiftedSizes& s, double eps) {
  check_args(m, n, eps);
  const double mm = m, nn = n, n1 = n + 1.0;
  const double a_term = s.n_a * std::sqrt(mm * mm + 3.0) *
                        (std::pow(mm, 6) + 3.0 + s.n_a * (std::pow(mm, 4) + 3.0) + s.n_a * s.n_a);
  const double v1_term = s.n_v1 * std::sqrt(2.0 * nn + 3.0) *
                         (n1 * n1 * n1 + nn + 2.0 + s.n_v1 * (n1 * n1 + nn + 2.0) + s.n_v1 * s.n_v1);
  const double v2_term = s.n_v2 * std::sqrt(2.0 * nn + 4.0) *
                         (n1 * n1 * n1 + nn + 3.0 + s.n_v2 * (n1 * n1 + nn + 3.0) + s.n_v2 * s.n_v2);
  return l1 * (a_term + v1_term + v2_term) * std::log(1.0 / eps);
}

double flops_cct(int m, int n, double l1, double eps) { return flops_cct(m, n, l1, lifted_sizes(m, n), eps); }

double flops_dtsca(int m, int n, double l2, double eps) {
  check_args(m, n, eps);
  const double mm = m, nn = n;
  const double na = mm * mm, nv1 = nn + 1.0, nv2 = nn + 1.0;
  const double a_term = na * std::sqrt(2.0) * (std::pow(mm, 4) + na * na);
  const double v1_term = nv1 * std::sqrt(2.0 * nn + 3.0) * (nv1 + nn + 1.0 + (nn + 2.0) * (nn + 2.0) + nv1 * nv1);
  const double v2_term = nv2 * std::sqrt(2.0 * nn + 1.0) * (nv2 + nn + 1.0 + nv2 * nv2);
  return l2 * (a_term + v1_term + v2_term) * std::log(1.0 / eps);
}

std::vector<FlopsRow> flops_curve(int m, const std::vector<int>& ns, double l1, double l2, double eps) {
  std::vector<FlopsRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) rows.push_back({m, n, flops_cct(m, n, l1, eps), flops_dtsca(m, n, l2, eps)});
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace rislink::flops
