// SPDX-License-Identifier: Apache-2.0
//
// irs-slp: robust symbol-level precoding and IRS passive beamforming
// Copyright (C) 2026 The irs-slp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irs/cone.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace irs::cone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

double min_eigenvalue(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct Block {
  ConeKind kind;
  int offset;
  int dim;
  int psd_n;
};

// Nesterov-Todd scaling of one block.
//  nonnegative: W = diag(w)
//  second-order: W = eta * Wbar(w), w^T J w = 1
//  PSD: W(U) = R^T U R
struct Scaling {
  RVector w;
  double eta = 1.0;
  RMatrix r;
  RMatrix rinv;
  RVector lambda;  // PSD: eigenvalues of the scaled point
};

class Cones {
 public:
  explicit Cones(std::vector<Block> blocks) : blocks_(std::move(blocks)), scalings_(blocks_.size()) {
    for (const auto& b : blocks_) {
      dim_ += b.dim;
      degree_ += b.kind == ConeKind::kNonnegative ? b.dim : (b.kind == ConeKind::kSecondOrder ? 1 : b.psd_n);
    }
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }

  RVector identity() const {
    RVector e = RVector::Zero(dim_);
    for (const auto& b : blocks_) {
      switch (b.kind) {
        case ConeKind::kNonnegative: e.segment(b.offset, b.dim).setOnes(); break;
        case ConeKind::kSecondOrder: e(b.offset) = 1.0; break;
        case ConeKind::kPsd: e.segment(b.offset, b.dim) = svec(RMatrix::Identity(b.psd_n, b.psd_n)); break;
        case ConeKind::kZero: break;
      }
    }
    return e;
  }

  void set_identity_scaling() {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const auto& b = blocks_[i];
      auto& sc = scalings_[i];
      switch (b.kind) {
        case ConeKind::kNonnegative: sc.w = RVector::Ones(b.dim); break;
        case ConeKind::kSecondOrder:
          sc.w = RVector::Zero(b.dim);
          sc.w(0) = 1.0;
          sc.eta = 1.0;
          break;
        case ConeKind::kPsd:
          sc.r = RMatrix::Identity(b.psd_n, b.psd_n);
          sc.rinv = sc.r;
          sc.lambda = RVector::Ones(b.psd_n);
          break;
        case ConeKind::kZero: break;
      }
    }
  }

  // Computes the NT scaling at (s, z) and lambda = W z. Returns false when a
  // point has left the interior.
  bool compute_scaling(const RVector& s, const RVector& z, RVector& lambda) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const auto& b = blocks_[i];
      auto& sc = scalings_[i];
      const auto sb = s.segment(b.offset, b.dim);
      const auto zb = z.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative:
          if ((sb.array() <= 0.0).any() || (zb.array() <= 0.0).any()) return false;
          sc.w = (sb.array() / zb.array()).sqrt();
          break;
        case ConeKind::kSecondOrder: {
          const double sres = sb(0) * sb(0) - sb.tail(b.dim - 1).squaredNorm();
          const double zres = zb(0) * zb(0) - zb.tail(b.dim - 1).squaredNorm();
          if (sres <= 0.0 || zres <= 0.0 || sb(0) <= 0.0 || zb(0) <= 0.0) return false;
          const double snorm = std::sqrt(sres);
          const double znorm = std::sqrt(zres);
          const RVector sbar = sb / snorm;
          const RVector zbar = zb / znorm;
          const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
          sc.w.resize(b.dim);
          sc.w(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
          sc.w.tail(b.dim - 1) = (sbar.tail(b.dim - 1) - zbar.tail(b.dim - 1)) / (2.0 * gamma);
          sc.eta = std::sqrt(snorm / znorm);
          break;
        }
        case ConeKind::kPsd: {
          const RMatrix sm = smat(sb, b.psd_n);
          const RMatrix zm = smat(zb, b.psd_n);
          Eigen::LLT<RMatrix> ls(sm);
          Eigen::LLT<RMatrix> lz(zm);
          if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
          const RMatrix lsm = ls.matrixL();
          const RMatrix lzm = lz.matrixL();
          Eigen::BDCSVD<RMatrix> svd(lzm.transpose() * lsm, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const RVector sv = svd.singularValues();
          if (!(sv.minCoeff() > 0.0)) return false;
          const RVector isq = sv.array().rsqrt();
          sc.r = lsm * svd.matrixV() * isq.asDiagonal();
          sc.rinv = isq.asDiagonal() * svd.matrixU().transpose() * lzm.transpose();
          sc.lambda = sv;
          break;
        }
        case ConeKind::kZero: break;
      }
    }
    lambda = apply_w(z);
    return true;
  }

  RVector apply_w(const RVector& v) const { return apply(v, Op::kW); }
  RVector apply_wt(const RVector& v) const { return apply(v, Op::kWt); }
  RVector apply_winv(const RVector& v) const { return apply(v, Op::kWinv); }
  RVector apply_winvt(const RVector& v) const { return apply(v, Op::kWinvT); }

  const std::vector<Block>& blocks() const { return blocks_; }
  const Scaling& scaling(std::size_t i) const { return scalings_[i]; }

  // W^{-T} applied to each column of a PSD block's rows.
  RMatrix scale_psd(std::size_t i, const RMatrix& g) const {
    RMatrix out(g.rows(), g.cols());
    for (Eigen::Index c = 0; c < g.cols(); ++c) out.col(c) = psd_scale_sparse(blocks_[i], scalings_[i].rinv, g.col(c));
    return out;
  }

  RVector product(const RVector& u, const RVector& v) const {
    RVector out(dim_);
    for (const auto& b : blocks_) {
      const auto ub = u.segment(b.offset, b.dim);
      const auto vb = v.segment(b.offset, b.dim);
      auto ob = out.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative: ob = ub.cwiseProduct(vb); break;
        case ConeKind::kSecondOrder:
          ob(0) = ub.dot(vb);
          ob.tail(b.dim - 1) = ub(0) * vb.tail(b.dim - 1) + vb(0) * ub.tail(b.dim - 1);
          break;
        case ConeKind::kPsd: {
          const RMatrix um = smat(ub, b.psd_n);
          const RMatrix vm = smat(vb, b.psd_n);
          const RMatrix uv = um * vm;
          ob = svec(0.5 * (uv + uv.transpose()));
          break;
        }
        case ConeKind::kZero: break;
      }
    }
    return out;
  }

  // Solves lambda o x = v for x.
  RVector divide(const RVector& lambda, const RVector& v) const {
    RVector out(dim_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const auto& b = blocks_[i];
      const auto lb = lambda.segment(b.offset, b.dim);
      const auto vb = v.segment(b.offset, b.dim);
      auto ob = out.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative: ob = vb.cwiseQuotient(lb); break;
        case ConeKind::kSecondOrder: {
          const double det = lb(0) * lb(0) - lb.tail(b.dim - 1).squaredNorm();
          const double x0 = (lb(0) * vb(0) - lb.tail(b.dim - 1).dot(vb.tail(b.dim - 1))) / det;
          ob(0) = x0;
          ob.tail(b.dim - 1) = (vb.tail(b.dim - 1) - x0 * lb.tail(b.dim - 1)) / lb(0);
          break;
        }
        case ConeKind::kPsd: {
          const RVector& lam = scalings_[i].lambda;
          int k = 0;
          for (int c = 0; c < b.psd_n; ++c)
            for (int r = c; r < b.psd_n; ++r, ++k) ob(k) = 2.0 * vb(k) / (lam(r) + lam(c));
          break;
        }
        case ConeKind::kZero: break;
      }
    }
    return out;
  }

  // Largest alpha with u + alpha * du in the cone (u interior).
  double max_step(const RVector& u, const RVector& du) const {
    double alpha = kInf;
    for (const auto& b : blocks_) {
      const auto ub = u.segment(b.offset, b.dim);
      const auto db = du.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative:
          for (int j = 0; j < b.dim; ++j)
            if (db(j) < 0.0) alpha = std::min(alpha, -ub(j) / db(j));
          break;
        case ConeKind::kSecondOrder: alpha = std::min(alpha, soc_step(ub, db)); break;
        case ConeKind::kPsd: {
          Eigen::LLT<RMatrix> llt(smat(ub, b.psd_n));
          if (llt.info() != Eigen::Success) return 0.0;
          RMatrix m = smat(db, b.psd_n);
          const auto l = llt.matrixL();
          m = l.solve(m);
          m = l.solve(m.transpose()).transpose();
          const double lmin = min_eigenvalue(0.5 * (m + m.transpose()));
          if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
          break;
        }
        case ConeKind::kZero: break;
      }
    }
    return alpha;
  }

  // inf { alpha : r + alpha * e in cone }
  double cone_residual(const RVector& r) const {
    double alpha = -kInf;
    for (const auto& b : blocks_) {
      const auto rb = r.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative: alpha = std::max(alpha, -rb.minCoeff()); break;
        case ConeKind::kSecondOrder: alpha = std::max(alpha, rb.tail(b.dim - 1).norm() - rb(0)); break;
        case ConeKind::kPsd: alpha = std::max(alpha, -min_eigenvalue(smat(rb, b.psd_n))); break;
        case ConeKind::kZero: break;
      }
    }
    return alpha;
  }

 private:
  enum class Op { kW, kWt, kWinv, kWinvT };

  RVector apply(const RVector& v, Op op) const {
    RVector out(dim_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const auto& b = blocks_[i];
      const auto& sc = scalings_[i];
      const auto vb = v.segment(b.offset, b.dim);
      auto ob = out.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative:
          ob = (op == Op::kW || op == Op::kWt) ? RVector(sc.w.cwiseProduct(vb)) : RVector(vb.cwiseQuotient(sc.w));
          break;
        case ConeKind::kSecondOrder: {
          const double w0 = sc.w(0);
          const auto w1 = sc.w.tail(b.dim - 1);
          const double t = w1.dot(vb.tail(b.dim - 1));
          if (op == Op::kW || op == Op::kWt) {
            ob(0) = sc.eta * (w0 * vb(0) + t);
            ob.tail(b.dim - 1) = sc.eta * (vb.tail(b.dim - 1) + (vb(0) + t / (1.0 + w0)) * w1);
          } else {
            ob(0) = (w0 * vb(0) - t) / sc.eta;
            ob.tail(b.dim - 1) = (vb.tail(b.dim - 1) - (vb(0) - t / (1.0 + w0)) * w1) / sc.eta;
          }
          break;
        }
        case ConeKind::kPsd: {
          const RMatrix m = smat(vb, b.psd_n);
          RMatrix res;
          switch (op) {
            case Op::kW: res = sc.r.transpose() * m * sc.r; break;
            case Op::kWt: res = sc.r * m * sc.r.transpose(); break;
            case Op::kWinv: res = sc.rinv.transpose() * m * sc.rinv; break;
            case Op::kWinvT: res = sc.rinv * m * sc.rinv.transpose(); break;
          }
          ob = svec(0.5 * (res + res.transpose()));
          break;
        }
        case ConeKind::kZero: break;
      }
    }
    return out;
  }

  // rinv * smat(col) * rinv^T, summing outer products over the nonzeros.
  static RVector psd_scale_sparse(const Block& b, const RMatrix& rinv, const Eigen::Ref<const RVector>& col) {
    const int n = b.psd_n;
    int nnz = 0;
    for (Eigen::Index k = 0; k < col.size(); ++k)
      if (col(k) != 0.0) ++nnz;
    if (nnz == 0) return RVector::Zero(b.dim);
    RMatrix acc;
    if (2 * nnz > n) {
      acc = rinv * smat(col, n) * rinv.transpose();
    } else {
      acc = RMatrix::Zero(n, n);
      int k = 0;
      for (int c = 0; c < n; ++c)
        for (int r = c; r < n; ++r, ++k) {
          if (col(k) == 0.0) continue;
          if (r == c) {
            acc.noalias() += col(k) * rinv.col(r) * rinv.col(r).transpose();
          } else {
            const double v = col(k) / kSqrt2;
            acc.noalias() += v * (rinv.col(r) * rinv.col(c).transpose() + rinv.col(c) * rinv.col(r).transpose());
          }
        }
    }
    return svec(0.5 * (acc + acc.transpose()));
  }

  static double soc_step(const Eigen::Ref<const RVector>& u, const Eigen::Ref<const RVector>& d) {
    const Eigen::Index n = u.size();
    const double c = u(0) * u(0) - u.tail(n - 1).squaredNorm();
    const double bq = 2.0 * (u(0) * d(0) - u.tail(n - 1).dot(d.tail(n - 1)));
    const double a = d(0) * d(0) - d.tail(n - 1).squaredNorm();
    // smallest positive root of a t^2 + b t + c (c > 0)
    const double scale = std::max({std::abs(a), std::abs(bq), std::abs(c)});
    if (std::abs(a) <= 1e-15 * scale) {
      if (bq < 0.0) return -c / bq;
      return kInf;
    }
    const double disc = bq * bq - 4.0 * a * c;
    if (disc < 0.0) return kInf;
    const double q = -0.5 * (bq + std::copysign(std::sqrt(disc), bq));
    double best = kInf;
    for (double root : {q / a, q != 0.0 ? c / q : kInf})
      if (root > 0.0) best = std::min(best, root);
    return best;
  }

  std::vector<Block> blocks_;
  std::vector<Scaling> scalings_;
  int dim_ = 0;
  int degree_ = 0;
};

// Newton system
//   [0  A^T G^T      ] [dx]   [rx]
//   [A  0   0        ] [dy] = [ry]
//   [G  0   -W^T W   ] [dz]   [rz]
// reduced to [H A^T; A 0] with H = sum_b G_b^T (W_b^T W_b)^{-1} G_b. Each
// block only touches the columns it has nonzeros in.
class Kkt {
 public:
  Kkt(const RMatrix& a, const RMatrix& g, const std::vector<Block>& blocks) : a_(a), g_(g) {
    for (const auto& b : blocks) {
      BlockCols bc;
      const auto gb = g.middleRows(b.offset, b.dim);
      for (Eigen::Index c = 0; c < g.cols(); ++c)
        if ((gb.col(c).array() != 0.0).any()) bc.cols.push_back(c);
      bc.g.resize(b.dim, static_cast<Eigen::Index>(bc.cols.size()));
      for (std::size_t j = 0; j < bc.cols.size(); ++j) bc.g.col(static_cast<Eigen::Index>(j)) = gb.col(bc.cols[j]);
      if (b.kind == ConeKind::kSecondOrder) {
        RMatrix gj = bc.g;
        gj.bottomRows(b.dim - 1) *= -1.0;
        bc.gjg = bc.g.transpose() * gj;
      }
      cols_.push_back(std::move(bc));
    }
  }

  bool factor(const Cones& cones) {
    const Eigen::Index n = g_.cols();
    const Eigen::Index p = a_.rows();
    h_.setZero(n, n);
    const auto& blocks = cones.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      const auto& bc = cols_[i];
      if (bc.cols.empty()) continue;
      const Scaling& sc = cones.scaling(i);
      RMatrix local;
      switch (b.kind) {
        case ConeKind::kNonnegative: {
          const RMatrix t = sc.w.cwiseInverse().asDiagonal() * bc.g;
          local = t.transpose() * t;
          break;
        }
        case ConeKind::kSecondOrder: {
          // (W^T W)^{-1} = (2 J w w^T J - J) / eta^2
          RVector jw = sc.w;
          jw.tail(b.dim - 1) *= -1.0;
          const RVector v = bc.g.transpose() * jw;
          local = (2.0 * v * v.transpose() - bc.gjg) / (sc.eta * sc.eta);
          break;
        }
        case ConeKind::kPsd: {
          const RMatrix t = cones.scale_psd(i, bc.g);
          local = t.transpose() * t;
          break;
        }
        case ConeKind::kZero: break;
      }
      for (std::size_t c = 0; c < bc.cols.size(); ++c)
        for (std::size_t r = 0; r < bc.cols.size(); ++r)
          h_(bc.cols[r], bc.cols[c]) += local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    h_ = 0.5 * (h_ + h_.transpose());
    const double scale = std::max(1.0, h_.diagonal().cwiseAbs().maxCoeff());
    double reg = 1e-13 * scale;
    for (int attempt = 0; attempt < 6; ++attempt, reg *= 100.0) {
      if (p == 0) {
        llt_.compute(h_ + reg * RMatrix::Identity(n, n));
        if (llt_.info() == Eigen::Success) return true;
      } else {
        RMatrix k(n + p, n + p);
        k.topLeftCorner(n, n) = h_ + reg * RMatrix::Identity(n, n);
        k.topRightCorner(n, p) = a_.transpose();
        k.bottomLeftCorner(p, n) = a_;
        k.bottomRightCorner(p, p) = -reg * RMatrix::Identity(p, p);
        lu_.compute(k);
        if (std::isfinite(lu_.rcond()) && lu_.rcond() > 1e-300) return true;
      }
    }
    return false;
  }

  // Returns dx, dy, dz and W dz, refined against the unreduced system.
  void solve(const Cones& cones, const RVector& rx, const RVector& ry, const RVector& rz, RVector& dx, RVector& dy,
             RVector& dz, RVector& wdz) const {
    solve_once(cones, rx, ry, rz, dx, dy, dz, wdz);
    const double scale = 1.0 + rx.norm() + ry.norm() + rz.norm();
    double last = kInf;
    for (int it = 0; it < 4; ++it) {
      const RVector ex = rx - a_.transpose() * dy - g_.transpose() * dz;
      const RVector ey = ry - a_ * dx;
      const RVector ez = rz - g_ * dx + cones.apply_wt(wdz);
      const double err = std::sqrt(ex.squaredNorm() + ey.squaredNorm() + ez.squaredNorm());
      if (err <= 1e-14 * scale || err >= 0.5 * last) break;
      last = err;
      RVector cx, cy, cz, cw;
      solve_once(cones, ex, ey, ez, cx, cy, cz, cw);
      dx += cx;
      dy += cy;
      dz += cz;
      wdz += cw;
    }
  }

 private:
  struct BlockCols {
    std::vector<Eigen::Index> cols;
    RMatrix g;    // rows of the block restricted to its nonzero columns
    RMatrix gjg;  // G^T J G for second-order blocks
  };

  void solve_once(const Cones& cones, const RVector& rx, const RVector& ry, const RVector& rz, RVector& dx,
                  RVector& dy, RVector& dz, RVector& wdz) const {
    const Eigen::Index n = g_.cols();
    const Eigen::Index p = a_.rows();
    const RVector t = cones.apply_winv(cones.apply_winvt(rz));
    RVector rhs(n + p);
    rhs.head(n) = rx + g_.transpose() * t;
    rhs.tail(p) = ry;
    const RVector sol = p == 0 ? RVector(llt_.solve(rhs)) : RVector(lu_.solve(rhs));
    dx = sol.head(n);
    dy = sol.tail(p);
    wdz = cones.apply_winvt(g_ * dx - rz);
    dz = cones.apply_winv(wdz);
  }

  const RMatrix& a_;
  const RMatrix& g_;
  std::vector<BlockCols> cols_;
  RMatrix h_;
  Eigen::LLT<RMatrix> llt_;
  Eigen::PartialPivLU<RMatrix> lu_;
};

struct Iterate {
  RVector x, y, z, s;
  double tau = 1.0;
  double kappa = 1.0;
};

struct Stats {
  double pres = kInf;
  double dres = kInf;
  double gap = kInf;
  double pcost = 0.0;
  double dcost = 0.0;
  double merit() const {
    return std::max({pres, dres, gap / (1.0 + std::min(std::abs(pcost), std::abs(dcost))),
                     std::abs(pcost - dcost) / (1.0 + std::abs(pcost))});
  }
};

}  // namespace

int svec_size(int size) { return size * (size + 1) / 2; }

RVector svec(const RMatrix& m) {
  const int n = static_cast<int>(m.rows());
  RVector v(svec_size(n));
  int k = 0;
  for (int c = 0; c < n; ++c)
    for (int r = c; r < n; ++r, ++k) v(k) = r == c ? m(r, c) : kSqrt2 * m(r, c);
  return v;
}

RMatrix smat(const RVector& v, int size) {
  RMatrix m(size, size);
  int k = 0;
  for (int c = 0; c < size; ++c)
    for (int r = c; r < size; ++r, ++k) {
      const double val = r == c ? v(k) : v(k) / kSqrt2;
      m(r, c) = val;
      m(c, r) = val;
    }
  return m;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInaccurate: return "inaccurate";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

ConeProgram::ConeProgram(int num_vars) : num_vars_(num_vars), objective_(RVector::Zero(num_vars)) {
  if (num_vars < 1) throw std::invalid_argument("cone program needs at least one variable");
}

int ConeProgram::add(ConeKind kind, RMatrix map, RVector offset, int psd_size) {
  if (map.cols() != num_vars_) throw std::invalid_argument("constraint map has wrong column count");
  if (map.rows() != offset.size()) throw std::invalid_argument("constraint map and offset sizes differ");
  if (kind == ConeKind::kSecondOrder && map.rows() < 1) throw std::invalid_argument("empty second-order cone");
  if (kind == ConeKind::kPsd && map.rows() != svec_size(psd_size))
    throw std::invalid_argument("PSD constraint rows must equal svec size");
  constraints_.push_back({kind, std::move(map), std::move(offset), psd_size});
  return static_cast<int>(constraints_.size()) - 1;
}

int ConeProgram::add_zero(RMatrix map, RVector offset) {
  return add(ConeKind::kZero, std::move(map), std::move(offset), 0);
}
int ConeProgram::add_nonnegative(RMatrix map, RVector offset) {
  return add(ConeKind::kNonnegative, std::move(map), std::move(offset), 0);
}
int ConeProgram::add_second_order(RMatrix map, RVector offset) {
  return add(ConeKind::kSecondOrder, std::move(map), std::move(offset), 0);
}
int ConeProgram::add_psd(int size, RMatrix map, RVector offset) {
  return add(ConeKind::kPsd, std::move(map), std::move(offset), size);
}

double ConeProgram::max_violation(const RVector& x) const {
  double worst = 0.0;
  for (const auto& c : constraints_) {
    const RVector v = c.map * x + c.offset;
    switch (c.kind) {
      case ConeKind::kZero: worst = std::max(worst, v.cwiseAbs().maxCoeff()); break;
      case ConeKind::kNonnegative: worst = std::max(worst, -v.minCoeff()); break;
      case ConeKind::kSecondOrder: worst = std::max(worst, v.tail(v.size() - 1).norm() - v(0)); break;
      case ConeKind::kPsd: worst = std::max(worst, -min_eigenvalue(smat(v, c.psd_size))); break;
    }
  }
  return std::max(worst, 0.0);
}

SolveReport solve(const ConeProgram& program, const SolveOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = program.num_vars();
  const auto& cons = program.constraints();

  int p = 0;
  int m = 0;
  for (const auto& c : cons) (c.kind == ConeKind::kZero ? p : m) += static_cast<int>(c.map.rows());
  if (m == 0) throw std::invalid_argument("cone program needs at least one conic constraint");

  RMatrix a(p, n), g(m, n);
  RVector b(p), h(m);
  std::vector<Block> blocks;
  std::vector<std::pair<bool, int>> where;  // (is_zero, row offset) per constraint
  int pr = 0;
  int gr = 0;
  for (const auto& c : cons) {
    const int rows = static_cast<int>(c.map.rows());
    if (c.kind == ConeKind::kZero) {
      a.middleRows(pr, rows) = c.map;
      b.segment(pr, rows) = -c.offset;
      where.emplace_back(true, pr);
      pr += rows;
    } else {
      g.middleRows(gr, rows) = -c.map;
      h.segment(gr, rows) = c.offset;
      blocks.push_back({c.kind, gr, rows, c.psd_size});
      where.emplace_back(false, gr);
      gr += rows;
    }
  }
  const RVector& cvec = program.objective();

  Cones cones(blocks);
  Kkt kkt(a, g, blocks);
  const RVector e = cones.identity();
  const double nu = cones.degree();

  SolveReport report;
  auto finish = [&](SolveStatus status, const Iterate& it, int iters) {
    report.status = status;
    report.iterations = iters;
    const bool certificate = status == SolveStatus::kInfeasible || status == SolveStatus::kUnbounded;
    const double scale = certificate ? 1.0 : it.tau;
    report.x = it.x / scale;
    report.objective = cvec.dot(report.x);
    report.max_violation = program.max_violation(report.x);
    report.duals.clear();
    for (std::size_t i = 0; i < cons.size(); ++i) {
      const int rows = static_cast<int>(cons[i].map.rows());
      report.duals.push_back(where[i].first ? RVector(it.y.segment(where[i].second, rows) / scale)
                                            : RVector(it.z.segment(where[i].second, rows) / scale));
    }
    report.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
  };

  // Initial point: least-squares primal and dual estimates pushed into the cone.
  Iterate it;
  cones.set_identity_scaling();
  if (!kkt.factor(cones)) {
    it.x = RVector::Zero(n);
    it.y = RVector::Zero(p);
    it.z = e;
    it.s = e;
    return finish(SolveStatus::kNumericalFailure, it, 0);
  }
  {
    RVector x1, y1, z1, wz1;
    kkt.solve(cones, RVector::Zero(n), b, h, x1, y1, z1, wz1);
    RVector s0 = -z1;
    const double ap = cones.cone_residual(s0);
    if (ap >= 0.0) s0 += (1.0 + ap) * e;
    RVector x2, y2, z2, wz2;
    kkt.solve(cones, -cvec, RVector::Zero(p), RVector::Zero(m), x2, y2, z2, wz2);
    const double ad = cones.cone_residual(z2);
    if (ad >= 0.0) z2 += (1.0 + ad) * e;
    it.x = x1;
    it.y = y2;
    it.z = z2;
    it.s = s0;
  }

  const double nb = std::max(1.0, b.size() ? b.norm() : 0.0);
  const double nh = std::max(1.0, h.norm());
  const double nc = std::max(1.0, cvec.norm());

  Iterate best = it;
  double best_merit = kInf;
  Stats best_stats;

  RVector lambda;
  for (int iter = 0; iter <= options.max_iter; ++iter) {
    const RVector rx = (p ? RVector(a.transpose() * it.y) : RVector::Zero(n)) + g.transpose() * it.z + it.tau * cvec;
    const RVector ry = p ? RVector(a * it.x - it.tau * b) : RVector::Zero(0);
    const RVector rz = g * it.x + it.s - it.tau * h;
    const double cx = cvec.dot(it.x);
    const double by = p ? b.dot(it.y) : 0.0;
    const double hz = h.dot(it.z);
    const double rt = it.kappa + cx + by + hz;

    Stats st;
    st.pcost = cx / it.tau;
    st.dcost = -(by + hz) / it.tau;
    st.gap = it.s.dot(it.z) / (it.tau * it.tau);
    st.pres = std::max(p ? ry.norm() / nb : 0.0, rz.norm() / nh) / it.tau;
    st.dres = rx.norm() / nc / it.tau;

    if (st.merit() < best_merit) {
      best_merit = st.merit();
      best = it;
      best_stats = st;
    }

    const double gap_tol = options.abstol * (1.0 + std::min(std::abs(st.pcost), std::abs(st.dcost)));
    if (st.pres <= options.feastol && st.dres <= options.feastol && st.gap <= gap_tol &&
        std::abs(st.pcost - st.dcost) <= options.abstol * (1.0 + std::abs(st.pcost)))
      return finish(SolveStatus::kOptimal, it, iter);

    // infeasibility certificates
    const double dual_obj = -(by + hz);
    if (dual_obj > 0.0 && it.kappa > it.tau) {
      const RVector ray = (p ? RVector(a.transpose() * it.y) : RVector::Zero(n)) + g.transpose() * it.z;
      if (ray.norm() <= options.feastol * dual_obj) {
        Iterate cert = it;
        cert.x.setZero();
        cert.y /= dual_obj;
        cert.z /= dual_obj;
        return finish(SolveStatus::kInfeasible, cert, iter);
      }
    }
    if (cx < 0.0 && it.kappa > it.tau) {
      const double ax = p ? (a * it.x).norm() : 0.0;
      const double gxs = (g * it.x + it.s).norm();
      if (std::max(ax, gxs) <= options.feastol * (-cx)) {
        Iterate cert = it;
        cert.x /= -cx;
        return finish(SolveStatus::kUnbounded, cert, iter);
      }
    }
    if (iter == options.max_iter) break;

    if (!cones.compute_scaling(it.s, it.z, lambda)) break;
    if (!kkt.factor(cones)) break;

    RVector x1, y1, z1, wz1;
    kkt.solve(cones, -cvec, b, h, x1, y1, z1, wz1);
    const double denom = -it.kappa / it.tau + cvec.dot(x1) + (p ? b.dot(y1) : 0.0) + h.dot(z1);

    const double mu = (it.s.dot(it.z) + it.tau * it.kappa) / (nu + 1.0);

    struct Direction {
      RVector dx, dy, dz, ds, wdz, dss;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double eta, const RVector& ts, double dk) {
      Direction d;
      RVector x0, y0, z0, wz0;
      kkt.solve(cones, -eta * rx, -eta * ry, -eta * rz - cones.apply_wt(ts), x0, y0, z0, wz0);
      const double num = -eta * rt + dk / it.tau - (cvec.dot(x0) + (p ? b.dot(y0) : 0.0) + h.dot(z0));
      d.dtau = num / denom;
      d.dx = x0 + d.dtau * x1;
      d.dy = y0 + d.dtau * y1;
      d.dz = z0 + d.dtau * z1;
      d.wdz = wz0 + d.dtau * wz1;
      d.dss = ts - d.wdz;
      d.ds = cones.apply_wt(d.dss);
      d.dkappa = (-dk - it.kappa * d.dtau) / it.tau;
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double alpha = std::min(cones.max_step(it.s, d.ds), cones.max_step(it.z, d.dz));
      if (d.dtau < 0.0) alpha = std::min(alpha, -it.tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -it.kappa / d.dkappa);
      return alpha;
    };

    // predictor
    const Direction aff = direction(1.0, -lambda, it.tau * it.kappa);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    // corrector
    const RVector target = cones.product(lambda, lambda) + cones.product(aff.dss, aff.wdz) - sigma * mu * e;
    const RVector ts = cones.divide(lambda, -target);
    const double dk = it.tau * it.kappa + aff.dtau * aff.dkappa - sigma * mu;
    const Direction dir = direction(1.0 - sigma, ts, dk);
    const double alpha = std::min(1.0, 0.99 * step_length(dir));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) break;

    it.x += alpha * dir.dx;
    it.y += alpha * dir.dy;
    it.z += alpha * dir.dz;
    it.s += alpha * dir.ds;
    it.tau += alpha * dir.dtau;
    it.kappa += alpha * dir.dkappa;
    if (!(it.tau > 0.0) || !(it.kappa > 0.0) || !it.x.allFinite()) break;
  }

  const double tol = options.reduced_tol;
  const bool close = best_stats.pres <= tol && best_stats.dres <= tol &&
                     best_stats.gap <= tol * (1.0 + std::min(std::abs(best_stats.pcost), std::abs(best_stats.dcost)));
  return finish(close ? SolveStatus::kInaccurate : SolveStatus::kNumericalFailure, best,
                options.max_iter);
}

}  // namespace irs::cone
