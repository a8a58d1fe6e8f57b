#pragma once

// Primal-dual interior-point method for block-diagonal semidefinite programs
//
//   (LMI side)         maximize  b^T y
//                      s.t.      S_k(y) = C_k - sum_i y_i A_{k,i}  >= 0   (PSD blocks)
//                                s(y)   = c   - G y                >= 0   (LP block)
//
//   (multiplier side)  minimize  sum_k <C_k, X_k> + c^T x
//                      s.t.      sum_k <A_{k,i}, X_k> + (G^T x)_i = b_i,  X_k >= 0, x >= 0
//
// with <A, X> = Re Tr[A X]. Blocks are Hermitian over Scalar (double or
// std::complex<double>). Infeasible start, HKM search direction, Mehrotra
// predictor-corrector.

#include "pwf/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace pwf::sdp {

template <typename Scalar>
struct SparseEntry {
  int row;
  int col;
  Scalar value;
};

template <typename Scalar>
using SparseCoeffs = std::vector<SparseEntry<Scalar>>;

template <typename Scalar>
struct LmiBlock {
  Eigen::Index size = 0;
  Matrix<Scalar> constant;                       // C_k, Hermitian
  std::vector<SparseCoeffs<Scalar>> coeffs;      // A_{k,i}, one list per variable (may be empty)
};

template <typename Scalar>
struct ConicProgram {
  Eigen::Index num_vars = 0;
  RealVector objective;                          // b
  std::vector<LmiBlock<Scalar>> blocks;
  RealVector lp_constant;                        // c
  Eigen::SparseMatrix<double> lp_matrix;         // G (rows = LP constraints)
  double objective_offset = 0.0;                 // added to both objectives when scaling the gap
};

struct IpmSettings {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 150;
  bool verbose = false;
};

enum class IpmStatus {
  optimal,
  lmi_infeasible,    // no y satisfies the constraints
  lmi_unbounded,     // b^T y unbounded above
  max_iterations,
  stalled,
};

template <typename Scalar>
struct IpmResult {
  IpmStatus status = IpmStatus::stalled;
  RealVector y;
  std::vector<Matrix<Scalar>> X;  // multipliers of the PSD blocks
  RealVector x;                   // multipliers of the LP rows
  double lmi_objective = 0.0;        // b^T y
  double multiplier_objective = 0.0; // <C, X> + c^T x
  double lmi_residual = 0.0;         // relative ||C - Z - A^T y||
  double multiplier_residual = 0.0;  // relative ||b - A(X)||
  double complementarity = 0.0;      // <X, Z> + x^T z
  int iterations = 0;
  std::string message;
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> hermitian_part(const Matrix<Scalar>& m) {
  return (m + m.adjoint()) / 2.0;
}

template <typename Scalar>
double inner(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  return std::real((a.conjugate().cwiseProduct(b)).sum());
}

/// Largest alpha with x + alpha dx >= 0 (infinity if unbounded).
template <typename Scalar>
double max_step(const Matrix<Scalar>& x, const Matrix<Scalar>& dx) {
  if (x.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::LLT<Matrix<Scalar>> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix<Scalar> t = llt.matrixL().solve(dx);
  Matrix<Scalar> s = llt.matrixL().solve(Matrix<Scalar>(t.adjoint()));
  s = hermitian_part(s);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(s, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

inline double max_step_lp(const RealVector& x, const RealVector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0) a = std::min(a, -x(i) / dx(i));
  return a;
}

template <typename Scalar>
class BlockOps {
 public:
  explicit BlockOps(const LmiBlock<Scalar>& blk) : blk_(blk) {
    for (std::size_t i = 0; i < blk.coeffs.size(); ++i) {
      if (blk.coeffs[i].empty()) continue;
      active_.push_back(static_cast<int>(i));
      nnz_ += blk.coeffs[i].size();
    }
    const double n2 = static_cast<double>(blk.size) * static_cast<double>(blk.size);
    const auto total = static_cast<double>(nnz_);
    // Pairwise evaluation costs total^2 / 2; the product route costs
    // total * n^2 + (#active) * total.
    pairwise_ = total * total / 2.0 <= total * n2 + static_cast<double>(active_.size()) * total;
  }

  Matrix<Scalar> adjoint(const RealVector& y) const {
    Matrix<Scalar> out = Matrix<Scalar>::Zero(blk_.size, blk_.size);
    for (int i : active_)
      for (const auto& e : blk_.coeffs[static_cast<std::size_t>(i)]) out(e.row, e.col) += y(i) * e.value;
    return out;
  }

  /// out_i += Re Tr[A_i W]
  void apply(const Matrix<Scalar>& w, RealVector& out) const {
    for (int i : active_) {
      Scalar acc = 0;
      for (const auto& e : blk_.coeffs[static_cast<std::size_t>(i)]) acc += e.value * w(e.col, e.row);
      out(i) += std::real(acc);
    }
  }

  /// M_ij += Re Tr[A_i X A_j G]
  void schur(const Matrix<Scalar>& x, const Matrix<Scalar>& g, RealMatrix& m) const {
    if (pairwise_) {
      for (std::size_t a = 0; a < active_.size(); ++a) {
        const auto& ci = blk_.coeffs[static_cast<std::size_t>(active_[a])];
        for (std::size_t b = a; b < active_.size(); ++b) {
          const auto& cj = blk_.coeffs[static_cast<std::size_t>(active_[b])];
          Scalar acc = 0;
          for (const auto& e : ci)
            for (const auto& f : cj) acc += e.value * f.value * x(e.col, f.row) * g(f.col, e.row);
          const double v = std::real(acc);
          m(active_[a], active_[b]) += v;
          if (a != b) m(active_[b], active_[a]) += v;
        }
      }
      return;
    }
    Matrix<Scalar> p(blk_.size, blk_.size);
    for (int j : active_) {
      p.setZero();
      for (const auto& f : blk_.coeffs[static_cast<std::size_t>(j)])
        p.noalias() += f.value * x.col(f.row) * g.row(f.col);
      for (int i : active_) {
        Scalar acc = 0;
        for (const auto& e : blk_.coeffs[static_cast<std::size_t>(i)]) acc += e.value * p(e.col, e.row);
        m(i, j) += std::real(acc);
      }
    }
  }

  double max_coeff_norm() const {
    double best = 0.0;
    for (int i : active_) {
      double s = 0.0;
      for (const auto& e : blk_.coeffs[static_cast<std::size_t>(i)]) s += std::norm(e.value);
      best = std::max(best, std::sqrt(s));
    }
    return best;
  }

  double coeff_norm(int i) const {
    double s = 0.0;
    for (const auto& e : blk_.coeffs[static_cast<std::size_t>(i)]) s += std::norm(e.value);
    return std::sqrt(s);
  }

 private:
  const LmiBlock<Scalar>& blk_;
  std::vector<int> active_;
  std::size_t nnz_ = 0;
  bool pairwise_ = true;
};

}  // namespace detail

template <typename Scalar>
IpmResult<Scalar> solve_conic(const ConicProgram<Scalar>& prog, const IpmSettings& settings = {}) {
  using Mat = Matrix<Scalar>;
  const Eigen::Index m = prog.num_vars;
  const std::size_t nb = prog.blocks.size();
  const Eigen::Index nlp = prog.lp_constant.size();
  const auto& G = prog.lp_matrix;
  const RealVector& b = prog.objective;
  const RealVector& c = prog.lp_constant;

  IpmResult<Scalar> res;
  if (b.size() != m || (nlp > 0 && (G.rows() != nlp || G.cols() != m)))
    throw DomainError("solve_conic: inconsistent program dimensions");

  std::vector<detail::BlockOps<Scalar>> ops;
  ops.reserve(nb);
  for (const auto& blk : prog.blocks) ops.emplace_back(blk);

  double degree = static_cast<double>(nlp);
  double cnorm2 = c.squaredNorm();
  for (const auto& blk : prog.blocks) {
    degree += static_cast<double>(blk.size);
    cnorm2 += blk.constant.squaredNorm();
  }
  if (degree == 0) throw DomainError("solve_conic: program has no constraints");
  const double bnorm = b.norm();
  const double cnorm = std::sqrt(cnorm2);

  // Starting point: scaled identities.
  std::vector<Mat> X(nb), Z(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const auto n = prog.blocks[k].size;
    const double sn = std::sqrt(static_cast<double>(n));
    double xi = std::max(10.0, sn);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double an = ops[k].coeff_norm(static_cast<int>(i));
      if (an > 0) xi = std::max(xi, static_cast<double>(n) * (1.0 + std::abs(b(i))) / (1.0 + an));
    }
    const double eta =
        std::max({10.0, sn, prog.blocks[k].constant.norm(), ops[k].max_coeff_norm()});
    X[k] = xi * Mat::Identity(n, n);
    Z[k] = eta * Mat::Identity(n, n);
  }
  RealVector x, z;
  if (nlp > 0) {
    double xi = 10.0, eta = 10.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double gn = G.col(i).norm();
      if (gn > 0) xi = std::max(xi, (1.0 + std::abs(b(i))) / (1.0 + gn));
      eta = std::max(eta, gn);
    }
    eta = std::max(eta, c.cwiseAbs().maxCoeff());
    x = RealVector::Constant(nlp, xi);
    z = RealVector::Constant(nlp, eta);
  }
  RealVector y = RealVector::Zero(m);

  auto apply_all = [&](const std::vector<Mat>& w, const RealVector* wlp) {
    RealVector out = RealVector::Zero(m);
    for (std::size_t k = 0; k < nb; ++k) ops[k].apply(w[k], out);
    if (nlp > 0 && wlp) out += G.transpose() * (*wlp);
    return out;
  };

  const double inf = std::numeric_limits<double>::infinity();
  int slow_steps = 0;
  auto finish = [&](IpmStatus status, std::string msg) {
    res.status = status;
    res.message = std::move(msg);
    res.y = y;
    res.X = X;
    res.x = x;
    return res;
  };

  for (int iter = 0; iter <= settings.max_iter; ++iter) {
    res.iterations = iter;
    // Residuals and objectives.
    std::vector<Mat> Rd(nb);
    double rd2 = 0.0, compl_ = 0.0, pobj = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      Rd[k] = prog.blocks[k].constant - Z[k] - ops[k].adjoint(y);
      Rd[k] = detail::hermitian_part(Rd[k]);
      rd2 += Rd[k].squaredNorm();
      compl_ += detail::inner(X[k], Z[k]);
      pobj += detail::inner(prog.blocks[k].constant, X[k]);
    }
    RealVector rdlp;
    if (nlp > 0) {
      rdlp = c - z - G * y;
      rd2 += rdlp.squaredNorm();
      compl_ += x.dot(z);
      pobj += c.dot(x);
    }
    const RealVector ax = apply_all(X, &x);
    const RealVector rp = b - ax;
    const double dobj = b.dot(y);
    res.lmi_objective = dobj;
    res.multiplier_objective = pobj;
    res.lmi_residual = std::sqrt(rd2) / (1.0 + cnorm);
    res.multiplier_residual = rp.norm() / (1.0 + bnorm);
    res.complementarity = compl_;
    const double off = prog.objective_offset;
    const double scale = std::max({1.0, std::abs(pobj + off), std::abs(dobj + off)});
    const double gap = std::max(std::abs(pobj - dobj), compl_);

    if (settings.verbose)
      std::cerr << "ipm " << iter << " pobj " << pobj << " dobj " << dobj << " pinf "
                << res.multiplier_residual << " dinf " << res.lmi_residual << " mu " << compl_ / degree
                << "\n";

    if (res.multiplier_residual <= settings.feas_tol && res.lmi_residual <= settings.feas_tol &&
        gap <= settings.gap_tol * scale)
      return finish(IpmStatus::optimal, "converged");

    // Certificates of infeasibility read off diverging iterates.
    if (res.lmi_residual <= settings.feas_tol && dobj > 1e8 * (1.0 + cnorm))
      return finish(IpmStatus::lmi_unbounded, "objective grows without bound along feasible y");
    if (res.multiplier_residual <= 1e-2 && pobj < 0 && -pobj > 1e8 * (1.0 + ax.norm()))
      return finish(IpmStatus::lmi_infeasible,
                    "multipliers X >= 0 with A(X) ~ 0 and <C,X> < 0 (Farkas certificate)");
    if (iter == settings.max_iter) break;

    // Schur complement.
    std::vector<Mat> Zinv(nb);
    bool ok = true;
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::LLT<Mat> llt(Z[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      Zinv[k] = llt.solve(Mat::Identity(Z[k].rows(), Z[k].cols()));
      Zinv[k] = detail::hermitian_part(Zinv[k]);
    }
    if (!ok) return finish(IpmStatus::stalled, "slack matrix lost definiteness");

    RealMatrix M = RealMatrix::Zero(m, m);
    for (std::size_t k = 0; k < nb; ++k) ops[k].schur(X[k], Zinv[k], M);
    RealVector xz;
    if (nlp > 0) {
      xz = x.cwiseQuotient(z);
      Eigen::SparseMatrix<double> gd = xz.asDiagonal() * G;
      M += RealMatrix(G.transpose() * gd);
    }
    M = (M + M.transpose()) / 2.0;
    Eigen::LLT<RealMatrix> chol(M);
    Eigen::LDLT<RealMatrix> ldlt;
    bool use_ldlt = chol.info() != Eigen::Success;
    if (use_ldlt) {
      const double reg = 1e-14 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
      M.diagonal().array() += reg;
      ldlt.compute(M);
      if (ldlt.info() != Eigen::Success) return finish(IpmStatus::stalled, "Schur complement singular");
    }
    auto solve_m = [&](const RealVector& r) -> RealVector {
      return use_ldlt ? RealVector(ldlt.solve(r)) : RealVector(chol.solve(r));
    };

    std::vector<Mat> XRdG(nb);
    for (std::size_t k = 0; k < nb; ++k) XRdG[k] = X[k] * Rd[k] * Zinv[k];

    struct Direction {
      std::vector<Mat> dX, dZ;
      RealVector dx, dz, dy;
    };
    auto direction = [&](double mu_t, const Direction* pred) {
      Direction d;
      d.dX.resize(nb);
      d.dZ.resize(nb);
      std::vector<Mat> rhs_mats(nb);
      std::vector<Mat> corr(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        rhs_mats[k] = XRdG[k] - mu_t * Zinv[k];
        if (pred) {
          corr[k] = pred->dX[k] * pred->dZ[k] * Zinv[k];
          rhs_mats[k] += corr[k];
        }
      }
      RealVector rhs = b;
      for (std::size_t k = 0; k < nb; ++k) ops[k].apply(rhs_mats[k], rhs);
      RealVector corr_lp;
      if (nlp > 0) {
        RealVector v = x.cwiseProduct(rdlp).cwiseQuotient(z) - mu_t * z.cwiseInverse();
        if (pred) {
          corr_lp = pred->dx.cwiseProduct(pred->dz).cwiseQuotient(z);
          v += corr_lp;
        }
        rhs += G.transpose() * v;
      }
      d.dy = solve_m(rhs);
      for (std::size_t k = 0; k < nb; ++k) {
        d.dZ[k] = detail::hermitian_part(Mat(Rd[k] - ops[k].adjoint(d.dy)));
        Mat dx = mu_t * Zinv[k] - X[k] - X[k] * d.dZ[k] * Zinv[k];
        if (pred) dx -= corr[k];
        d.dX[k] = detail::hermitian_part(dx);
      }
      if (nlp > 0) {
        d.dz = rdlp - G * d.dy;
        d.dx = mu_t * z.cwiseInverse() - x - x.cwiseProduct(d.dz).cwiseQuotient(z);
        if (pred) d.dx -= corr_lp;
      }
      return d;
    };
    auto steps = [&](const Direction& d) {
      double ap = inf, ad = inf;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, detail::max_step(X[k], d.dX[k]));
        ad = std::min(ad, detail::max_step(Z[k], d.dZ[k]));
      }
      if (nlp > 0) {
        ap = std::min(ap, detail::max_step_lp(x, d.dx));
        ad = std::min(ad, detail::max_step_lp(z, d.dz));
      }
      return std::pair<double, double>{ap, ad};
    };

    const double mu = compl_ / degree;
    const Direction pred = direction(0.0, nullptr);
    auto [ap0, ad0] = steps(pred);
    ap0 = std::min(1.0, ap0);
    ad0 = std::min(1.0, ad0);
    double compl_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k)
      compl_aff += detail::inner(Mat(X[k] + ap0 * pred.dX[k]), Mat(Z[k] + ad0 * pred.dZ[k]));
    if (nlp > 0) compl_aff += (x + ap0 * pred.dx).dot(z + ad0 * pred.dz);
    const double ratio = std::clamp(compl_aff / compl_, 0.0, 1.0);
    const double sigma = std::pow(ratio, 3);

    const Direction corr = direction(sigma * mu, &pred);
    auto [ap, ad] = steps(corr);
    const double gamma = std::max(0.9, 1.0 - 5.0 * sigma);
    ap = std::min(1.0, std::min(gamma, 0.995) * ap);
    ad = std::min(1.0, std::min(gamma, 0.995) * ad);
    if (ap < 1e-10 && ad < 1e-10) {
      if (++slow_steps >= 3) return finish(IpmStatus::stalled, "step lengths collapsed");
    } else {
      slow_steps = 0;
    }

    for (std::size_t k = 0; k < nb; ++k) {
      X[k] = detail::hermitian_part(Mat(X[k] + ap * corr.dX[k]));
      Z[k] = detail::hermitian_part(Mat(Z[k] + ad * corr.dZ[k]));
    }
    if (nlp > 0) {
      x += ap * corr.dx;
      z += ad * corr.dz;
    }
    y += ad * corr.dy;
  }
  return finish(IpmStatus::max_iterations, "iteration limit reached");
}

}  // namespace pwf::sdp
