// SPDX-License-Identifier: Apache-2.0
//
// Infeasible-start primal-dual interior-point method for
//   min <C,X> s.t. <A_i,X> = b_i, X in (PSD blocks) x (R_+^l).
//
// Search direction: HKM (dX = (sigma mu I - XZ - corr - X dZ) Z^{-1},
// symmetrized), Mehrotra predictor-corrector, separate primal and dual
// step lengths. The Schur complement M_ij = tr(A_i X A_j Z^{-1}) is formed
// densely; sparse coefficient pairs use the entry lists directly.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "rislink/conic.hpp"

namespace rislink::conic {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

SymCoeff SymCoeff::from_dense(int block, const RealMatrix& m, int max_nnz) {
  SymCoeff c;
  c.block = block;
  std::vector<Entry> entries;
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i <= j; ++i) {
      if (m(i, j) != 0.0) entries.push_back({i, j, m(i, j)});
    }
  }
  if (static_cast<int>(entries.size()) <= max_nnz) {
    c.dense = false;
    c.entries = std::move(entries);
    c.matrix.resize(m.rows(), m.cols());  // keeps the block size
  } else {
    c.dense = true;
    c.matrix = 0.5 * (m + m.transpose());
  }
  return c;
}

double SymCoeff::dot(const RealMatrix& w) const {
  if (dense) return matrix.cwiseProduct(w).sum();
  double s = 0.0;
  for (const auto& e : entries) {
    s += e.row == e.col ? e.value * w(e.row, e.col) : e.value * (w(e.row, e.col) + w(e.col, e.row));
  }
  return s;
}

void SymCoeff::add_to(RealMatrix& w, double scale) const {
  if (dense) {
    w.noalias() += scale * matrix;
    return;
  }
  for (const auto& e : entries) {
    w(e.row, e.col) += scale * e.value;
    if (e.row != e.col) w(e.col, e.row) += scale * e.value;
  }
}

double SymCoeff::max_abs() const {
  if (dense) return matrix.size() ? matrix.cwiseAbs().maxCoeff() : 0.0;
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::abs(e.value));
  return m;
}

double ConeCoeff::max_abs() const {
  double m = 0.0;
  for (const auto& c : psd) m = std::max(m, c.max_abs());
  for (const auto& [idx, v] : lp) m = std::max(m, std::abs(v));
  return m;
}

void ConeCoeff::scale(double factor) {
  for (auto& c : psd) {
    if (c.dense) {
      c.matrix *= factor;
    } else {
      for (auto& e : c.entries) e.value *= factor;
    }
  }
  for (auto& [idx, v] : lp) v *= factor;
}

void ConeProgram::validate() const {
  if (static_cast<Eigen::Index>(constraints.size()) != rhs.size()) {
    throw std::invalid_argument("ConeProgram: constraint count does not match rhs length");
  }
  auto check = [&](const ConeCoeff& c) {
    for (const auto& s : c.psd) {
      if (s.block < 0 || s.block >= static_cast<int>(psd_sizes.size())) {
        throw std::invalid_argument("ConeProgram: coefficient references unknown block");
      }
      const int n = psd_sizes[s.block];
      if (s.dense && (s.matrix.rows() != n || s.matrix.cols() != n)) {
        throw std::invalid_argument("ConeProgram: dense coefficient has wrong size");
      }
      for (const auto& e : s.entries) {
        if (e.row < 0 || e.col >= n || e.row > e.col) {
          throw std::invalid_argument("ConeProgram: sparse entry out of range");
        }
      }
    }
    for (const auto& [idx, v] : c.lp) {
      if (idx < 0 || idx >= lp_size) throw std::invalid_argument("ConeProgram: orthant index out of range");
    }
  };
  check(objective);
  for (const auto& c : constraints) check(c);
}

namespace {

struct Expanded {
  int a;
  int b;
  double v;
};

std::vector<Expanded> expand(const SymCoeff& c) {
  std::vector<Expanded> out;
  out.reserve(2 * c.entries.size());
  for (const auto& e : c.entries) {
    out.push_back({e.row, e.col, e.value});
    if (e.row != e.col) out.push_back({e.col, e.row, e.value});
  }
  return out;
}

// Largest alpha with X + alpha dX PSD (infinity when unconstrained).
double max_step_psd(const RealMatrix& x, const RealMatrix& dx) {
  Eigen::LLT<RealMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix l_inv_dx = llt.matrixL().solve(dx);
  const RealMatrix s = llt.matrixL().solve(l_inv_dx.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_lp(const RealVector& x, const RealVector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConeProgram& prog, const SolverSettings& settings) : prog_(prog), settings_(settings) {
    prog_.validate();
    m_ = static_cast<int>(prog_.constraints.size());
    nblocks_ = static_cast<int>(prog_.psd_sizes.size());
    lp_ = prog_.lp_size;

    by_block_.resize(nblocks_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& c : prog_.constraints[i].psd) {
        by_block_[c.block].push_back({i, &c, c.dense ? std::vector<Expanded>{} : expand(c)});
      }
    }
    a_lp_ = RealMatrix::Zero(m_, lp_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& [idx, v] : prog_.constraints[i].lp) a_lp_(i, idx) += v;
    }
    c_blocks_.resize(nblocks_);
    for (int k = 0; k < nblocks_; ++k) c_blocks_[k] = RealMatrix::Zero(prog_.psd_sizes[k], prog_.psd_sizes[k]);
    for (const auto& c : prog_.objective.psd) c.add_to(c_blocks_[c.block], 1.0);
    c_lp_ = RealVector::Zero(lp_);
    for (const auto& [idx, v] : prog_.objective.lp) c_lp_(idx) += v;

    nu_ = lp_;
    for (int n : prog_.psd_sizes) nu_ += n;
  }

  ConeSolution run();

 private:
  struct Touch {
    int constraint;
    const SymCoeff* coeff;
    std::vector<Expanded> expanded;
  };

  RealVector apply_a(const std::vector<RealMatrix>& x, const RealVector& x_lp) const {
    RealVector out = a_lp_ * x_lp;
    for (int k = 0; k < nblocks_; ++k) {
      for (const auto& t : by_block_[k]) out(t.constraint) += t.coeff->dot(x[k]);
    }
    return out;
  }

  void apply_at(const RealVector& y, std::vector<RealMatrix>& out, RealVector& out_lp) const {
    out.resize(nblocks_);
    for (int k = 0; k < nblocks_; ++k) {
      out[k] = RealMatrix::Zero(prog_.psd_sizes[k], prog_.psd_sizes[k]);
      for (const auto& t : by_block_[k]) t.coeff->add_to(out[k], y(t.constraint));
    }
    out_lp = a_lp_.transpose() * y;
  }

  RealMatrix schur(const std::vector<RealMatrix>& x, const std::vector<RealMatrix>& zinv, const RealVector& x_lp,
                   const RealVector& z_lp) const {
    RealMatrix mm = RealMatrix::Zero(m_, m_);
    for (int k = 0; k < nblocks_; ++k) {
      const auto& touches = by_block_[k];
      for (const auto& tj : touches) {
        if (tj.coeff->dense) {
          const RealMatrix p = x[k] * tj.coeff->matrix * zinv[k];
          for (const auto& ti : touches) {
            const double v = ti.coeff->dot(p);
            mm(ti.constraint, tj.constraint) += v;
            if (!ti.coeff->dense) mm(tj.constraint, ti.constraint) += v;
          }
        } else {
          for (const auto& ti : touches) {
            if (ti.coeff->dense) continue;
            double s = 0.0;
            for (const auto& ei : ti.expanded) {
              for (const auto& ej : tj.expanded) s += ei.v * ej.v * x[k](ei.b, ej.a) * zinv[k](ej.b, ei.a);
            }
            mm(ti.constraint, tj.constraint) += s;
          }
        }
      }
    }
    if (lp_ > 0) {
      const RealVector ratio = x_lp.cwiseQuotient(z_lp);
      mm.noalias() += a_lp_ * ratio.asDiagonal() * a_lp_.transpose();
    }
    return 0.5 * (mm + mm.transpose());
  }

  const ConeProgram& prog_;
  SolverSettings settings_;
  int m_ = 0;
  int nblocks_ = 0;
  int lp_ = 0;
  double nu_ = 0.0;
  std::vector<std::vector<Touch>> by_block_;
  RealMatrix a_lp_;
  std::vector<RealMatrix> c_blocks_;
  RealVector c_lp_;
};

ConeSolution InteriorPoint::run() {
  const RealVector& b = prog_.rhs;
  const double b_norm = b.norm();
  double c_norm2 = c_lp_.squaredNorm();
  for (const auto& c : c_blocks_) c_norm2 += c.squaredNorm();
  const double c_norm = std::sqrt(c_norm2);

  // Starting point scaled to the data.
  std::vector<RealMatrix> x(nblocks_), z(nblocks_);
  for (int k = 0; k < nblocks_; ++k) {
    const int n = prog_.psd_sizes[k];
    double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
    double eta = std::max(xi, c_blocks_[k].norm());
    for (const auto& t : by_block_[k]) {
      const double a_norm = t.coeff->dense ? t.coeff->matrix.norm() : std::sqrt(2.0) * t.coeff->max_abs();
      xi = std::max(xi, n * (1.0 + std::abs(b(t.constraint))) / (1.0 + a_norm));
      eta = std::max(eta, a_norm);
    }
    x[k] = xi * RealMatrix::Identity(n, n);
    z[k] = eta * RealMatrix::Identity(n, n);
  }
  RealVector x_lp = RealVector::Constant(lp_, 10.0);
  RealVector z_lp = RealVector::Constant(lp_, 10.0);
  for (int l = 0; l < lp_; ++l) {
    double xi = 10.0, eta = std::max(10.0, std::abs(c_lp_(l)));
    for (int i = 0; i < m_; ++i) {
      if (a_lp_(i, l) != 0.0) {
        xi = std::max(xi, (1.0 + std::abs(b(i))) / (1.0 + std::abs(a_lp_(i, l))));
        eta = std::max(eta, std::abs(a_lp_(i, l)));
      }
    }
    x_lp(l) = xi;
    z_lp(l) = eta;
  }
  RealVector y = RealVector::Zero(m_);

  ConeSolution sol;
  std::vector<RealMatrix> aty, rd(nblocks_), zinv(nblocks_);
  RealVector aty_lp, rd_lp;
  int stall = 0;

  for (int iter = 0; iter <= settings_.max_iterations; ++iter) {
    sol.iterations = iter;
    apply_at(y, aty, aty_lp);
    double pobj = c_lp_.dot(x_lp), gap_xz = x_lp.dot(z_lp), rd_norm2 = 0.0;
    for (int k = 0; k < nblocks_; ++k) {
      rd[k] = c_blocks_[k] - z[k] - aty[k];
      rd_norm2 += rd[k].squaredNorm();
      pobj += c_blocks_[k].cwiseProduct(x[k]).sum();
      gap_xz += x[k].cwiseProduct(z[k]).sum();
    }
    rd_lp = c_lp_ - z_lp - aty_lp;
    rd_norm2 += rd_lp.squaredNorm();
    const RealVector rp = b - apply_a(x, x_lp);
    const double dobj = b.dot(y);
    const double mu = gap_xz / nu_;

    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.primal_infeasibility = rp.norm() / (1.0 + b_norm);
    sol.dual_infeasibility = std::sqrt(rd_norm2) / (1.0 + c_norm);
    sol.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (settings_.verbose) {
      std::fprintf(stderr, "ipm %3d  pobj % .10e  dobj % .10e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e\n", iter, pobj,
                   dobj, sol.relative_gap, sol.primal_infeasibility, sol.dual_infeasibility, mu);
    }

    const double tol = settings_.tolerance;
    if (sol.relative_gap < tol && sol.primal_infeasibility < tol && sol.dual_infeasibility < tol) {
      sol.status = Status::Optimal;
      break;
    }
    // Farkas-type certificates on diverging iterates.
    if (dobj > 0.0) {
      double ray = (aty_lp + z_lp).squaredNorm();
      for (int k = 0; k < nblocks_; ++k) ray += (aty[k] + z[k]).squaredNorm();
      if (std::sqrt(ray) / dobj < 1e-9 && dobj > 1e8 * (1.0 + c_norm)) {
        sol.status = Status::Infeasible;
        break;
      }
    }
    if (pobj < 0.0 && -pobj > 1e8 * (1.0 + b_norm)) {
      const double ax = apply_a(x, x_lp).norm();
      if (ax / -pobj < 1e-9) {
        sol.status = Status::Unbounded;
        break;
      }
    }
    if (iter == settings_.max_iterations || stall >= 5) {
      const double loose = 1e-7;
      sol.status = (sol.relative_gap < loose && sol.primal_infeasibility < loose && sol.dual_infeasibility < loose)
                       ? Status::Optimal
                       : Status::NumericalFailure;
      break;
    }

    bool factor_ok = true;
    for (int k = 0; k < nblocks_; ++k) {
      Eigen::LLT<RealMatrix> llt(z[k]);
      if (llt.info() != Eigen::Success) {
        factor_ok = false;
        break;
      }
      zinv[k] = llt.solve(RealMatrix::Identity(z[k].rows(), z[k].cols()));
      zinv[k] = 0.5 * (zinv[k] + zinv[k].transpose());
    }
    if (!factor_ok) {
      sol.status = Status::NumericalFailure;
      break;
    }

    RealMatrix mm = schur(x, zinv, x_lp, z_lp);
    Eigen::LLT<RealMatrix> mfac(mm);
    if (mfac.info() != Eigen::Success) {
      const double ridge = 1e-13 * std::max(1.0, mm.diagonal().cwiseAbs().maxCoeff());
      mm.diagonal().array() += ridge;
      mfac.compute(mm);
      if (mfac.info() != Eigen::Success) {
        sol.status = Status::NumericalFailure;
        break;
      }
    }

    struct Direction {
      std::vector<RealMatrix> dx, dz;
      RealVector dx_lp, dz_lp, dy;
    };

    auto direction = [&](double target, const std::vector<RealMatrix>* corr, const RealVector* corr_lp) {
      Direction d;
      d.dx.resize(nblocks_);
      d.dz.resize(nblocks_);
      std::vector<RealMatrix> h(nblocks_), g(nblocks_);
      for (int k = 0; k < nblocks_; ++k) {
        h[k] = target * zinv[k] - x[k];
        if (corr) h[k].noalias() -= (*corr)[k] * zinv[k];
        g[k] = h[k] - x[k] * rd[k] * zinv[k];
      }
      RealVector h_lp = RealVector::Zero(lp_), g_lp = RealVector::Zero(lp_);
      for (int l = 0; l < lp_; ++l) {
        h_lp(l) = target / z_lp(l) - x_lp(l);
        if (corr_lp) h_lp(l) -= (*corr_lp)(l) / z_lp(l);
        g_lp(l) = h_lp(l) - x_lp(l) * rd_lp(l) / z_lp(l);
      }
      const RealVector rhs = rp - apply_a(g, g_lp);
      d.dy = mfac.solve(rhs);
      std::vector<RealMatrix> at_dy;
      RealVector at_dy_lp;
      apply_at(d.dy, at_dy, at_dy_lp);
      for (int k = 0; k < nblocks_; ++k) {
        d.dz[k] = rd[k] - at_dy[k];
        RealMatrix dx = h[k] - x[k] * d.dz[k] * zinv[k];
        d.dx[k] = 0.5 * (dx + dx.transpose());
      }
      d.dz_lp = rd_lp - at_dy_lp;
      d.dx_lp = h_lp - x_lp.cwiseProduct(d.dz_lp).cwiseQuotient(z_lp);
      return d;
    };

    auto steps = [&](const Direction& d) {
      double ap = max_step_lp(x_lp, d.dx_lp), ad = max_step_lp(z_lp, d.dz_lp);
      for (int k = 0; k < nblocks_; ++k) {
        ap = std::min(ap, max_step_psd(x[k], d.dx[k]));
        ad = std::min(ad, max_step_psd(z[k], d.dz[k]));
      }
      return std::pair<double, double>{ap, ad};
    };

    // Predictor.
    const Direction pred = direction(0.0, nullptr, nullptr);
    const auto [ap_max, ad_max] = steps(pred);
    const double ap = std::min(1.0, ap_max), ad = std::min(1.0, ad_max);
    double gap_aff = (x_lp + ap * pred.dx_lp).dot(z_lp + ad * pred.dz_lp);
    for (int k = 0; k < nblocks_; ++k) gap_aff += (x[k] + ap * pred.dx[k]).cwiseProduct(z[k] + ad * pred.dz[k]).sum();
    const double mu_aff = std::max(0.0, gap_aff / nu_);
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::min(1.0, std::pow(mu_aff / mu, expon));

    // Corrector.
    std::vector<RealMatrix> corr(nblocks_);
    for (int k = 0; k < nblocks_; ++k) corr[k] = pred.dx[k] * pred.dz[k];
    const RealVector corr_lp = pred.dx_lp.cwiseProduct(pred.dz_lp);
    const Direction d = direction(sigma * mu, &corr, &corr_lp);
    const auto [cp_max, cd_max] = steps(d);
    const double gamma = std::max(settings_.step_fraction, 0.9 + 0.09 * std::min(ap, ad));
    const double gamma_eff = std::min(gamma, 0.995);
    const double alpha_p = std::min(1.0, gamma_eff * cp_max);
    const double alpha_d = std::min(1.0, gamma_eff * cd_max);

    for (int k = 0; k < nblocks_; ++k) {
      x[k] += alpha_p * d.dx[k];
      z[k] += alpha_d * d.dz[k];
      x[k] = 0.5 * (x[k] + x[k].transpose());
      z[k] = 0.5 * (z[k] + z[k].transpose());
    }
    x_lp += alpha_p * d.dx_lp;
    z_lp += alpha_d * d.dz_lp;
    y += alpha_d * d.dy;

    stall = (alpha_p < 1e-8 && alpha_d < 1e-8) ? stall + 1 : 0;
  }

  sol.X = std::move(x);
  sol.Z = std::move(z);
  sol.x_lp = std::move(x_lp);
  sol.z_lp = std::move(z_lp);
  sol.y = std::move(y);
  return sol;
}

}  // namespace

ConeSolution solve_cone(const ConeProgram& prog, const SolverSettings& settings) {
  InteriorPoint ipm(prog, settings);
  return ipm.run();
}

}  // namespace rislink::conic
