#include "pwf/sdp/interior_point.hpp"
#include "pwf/sdp/problem.hpp"

#include <algorithm>
#include <sstream>

namespace pwf::sdp {

namespace {

// A Hermitian n x n variable is parametrized by n diagonal entries followed by the
// real and imaginary parts of each strictly upper entry; a real symmetric one drops
// the imaginary parts.
enum class ParamKind { diag, re, im };

struct Param {
  VarId var;
  Eigen::Index k, l;
  ParamKind kind;
};

struct Layout {
  std::vector<Param> params;
  std::vector<std::size_t> offset;
  std::vector<std::size_t> count;

  explicit Layout(const SdpProblem& p) {
    for (std::size_t id = 0; id < p.variables().size(); ++id) {
      const auto& v = p.variables()[id];
      const auto var = static_cast<VarId>(id);
      offset.push_back(params.size());
      for (Eigen::Index k = 0; k < v.side; ++k) params.push_back({var, k, k, ParamKind::diag});
      for (Eigen::Index k = 0; k < v.side; ++k)
        for (Eigen::Index l = k + 1; l < v.side; ++l) {
          params.push_back({var, k, l, ParamKind::re});
          if (v.hermitian) params.push_back({var, k, l, ParamKind::im});
        }
      count.push_back(params.size() - offset.back());
    }
  }
  std::size_t size() const { return params.size(); }
};

const Complex kI(0.0, 1.0);

// Re Tr[M E_j] for the basis matrix E_j of a parameter.
double linear_coeff(const ComplexMatrix& m, const Param& q) {
  switch (q.kind) {
    case ParamKind::diag:
      return m(q.k, q.k).real();
    case ParamKind::re:
      return m(q.l, q.k).real() + m(q.k, q.l).real();
    case ParamKind::im:
      return -m(q.l, q.k).imag() + m(q.k, q.l).imag();
  }
  return 0.0;
}

using Trip = SparseEntry<Complex>;
using TripList = std::vector<Trip>;

void push_dense(TripList& out, const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0)) out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
}

void combine(TripList& t) {
  std::sort(t.begin(), t.end(), [](const Trip& a, const Trip& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  TripList out;
  for (const auto& e : t) {
    if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
      out.back().value += e.value;
    else
      out.push_back(e);
  }
  double big = 0.0;
  for (const auto& e : out) big = std::max(big, std::abs(e.value));
  t.clear();
  for (const auto& e : out)
    if (std::abs(e.value) > 1e-14 * std::max(1.0, big)) t.push_back(e);
}

// Contribution of one parameter to the expression of a matrix term.
void param_matrix_terms(const MatrixForm::Term& term, const Param& q, TripList& out) {
  const double w = term.weight;
  switch (term.kind) {
    case MatrixForm::Kind::identity:
      switch (q.kind) {
        case ParamKind::diag:
          out.push_back({static_cast<int>(q.k), static_cast<int>(q.k), w});
          break;
        case ParamKind::re:
          out.push_back({static_cast<int>(q.k), static_cast<int>(q.l), w});
          out.push_back({static_cast<int>(q.l), static_cast<int>(q.k), w});
          break;
        case ParamKind::im:
          out.push_back({static_cast<int>(q.k), static_cast<int>(q.l), w * kI});
          out.push_back({static_cast<int>(q.l), static_cast<int>(q.k), -w * kI});
          break;
      }
      break;
    case MatrixForm::Kind::congruence: {
      const ComplexVector bk = term.factor.col(q.k);
      const ComplexVector bl = term.factor.col(q.l);
      ComplexMatrix m;
      switch (q.kind) {
        case ParamKind::diag:
          m = w * bk * bk.adjoint();
          break;
        case ParamKind::re:
          m = w * (bk * bl.adjoint() + bl * bk.adjoint());
          break;
        case ParamKind::im:
          m = w * kI * (bk * bl.adjoint() - bl * bk.adjoint());
          break;
      }
      push_dense(out, m);
      break;
    }
    case MatrixForm::Kind::scale:
      push_dense(out, term.factor);
      break;
  }
}

struct AffineLinear {
  double constant = 0.0;
  RealVector coeffs;  // over the full parameter vector
};

AffineLinear lower_linear(const SdpProblem& p, const Layout& lay, const LinearForm& f) {
  AffineLinear a{f.constant, RealVector::Zero(static_cast<Eigen::Index>(lay.size()))};
  for (const auto& t : f.terms) {
    const auto id = static_cast<std::size_t>(t.var);
    for (std::size_t j = lay.offset[id]; j < lay.offset[id] + lay.count[id]; ++j)
      a.coeffs(static_cast<Eigen::Index>(j)) += linear_coeff(t.coeff, lay.params[j]);
  }
  (void)p;
  return a;
}

struct AffineMatrix {
  Eigen::Index size = 0;
  ComplexMatrix constant;
  std::vector<TripList> coeffs;  // per parameter
};

AffineMatrix lower_matrix(const Layout& lay, const MatrixForm& f) {
  AffineMatrix a{f.size, f.constant, std::vector<TripList>(lay.size())};
  for (const auto& t : f.terms) {
    const auto id = static_cast<std::size_t>(t.var);
    for (std::size_t j = lay.offset[id]; j < lay.offset[id] + lay.count[id]; ++j)
      param_matrix_terms(t, lay.params[j], a.coeffs[j]);
  }
  for (auto& c : a.coeffs) combine(c);
  return a;
}

// Reduced row echelon form of the equality system A y = r. Pivot parameters are
// expressed through the free ones: y_p = rhs - sum_j R_j y_j.
struct Elimination {
  std::vector<std::size_t> pivots;                              // pivot parameter per row
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;  // nonzeros on free parameters
  std::vector<double> rhs;
  std::vector<std::size_t> free;      // free parameter list
  std::vector<long> free_index;       // parameter -> free position or -1
  bool consistent = true;
  double inconsistency = 0.0;
};

Elimination eliminate(RealMatrix a, RealVector r, std::size_t nparams) {
  Elimination el;
  const Eigen::Index neq = a.rows();
  const auto np = static_cast<Eigen::Index>(nparams);
  Eigen::Index row = 0;
  std::vector<bool> is_pivot(nparams, false);
  const double scale = std::max(1.0, max_abs(a));
  for (Eigen::Index col = 0; col < np && row < neq; ++col) {
    Eigen::Index best = row;
    for (Eigen::Index i = row + 1; i < neq; ++i)
      if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
    if (std::abs(a(best, col)) <= 1e-10 * scale) continue;
    if (best != row) {
      a.row(best).swap(a.row(row));
      std::swap(r(best), r(row));
    }
    const double piv = a(row, col);
    a.row(row) /= piv;
    r(row) /= piv;
    for (Eigen::Index i = 0; i < neq; ++i) {
      if (i == row) continue;
      const double f = a(i, col);
      if (f == 0.0) continue;
      a.row(i) -= f * a.row(row);
      r(i) -= f * r(row);
      a(i, col) = 0.0;
    }
    el.pivots.push_back(static_cast<std::size_t>(col));
    is_pivot[static_cast<std::size_t>(col)] = true;
    ++row;
  }
  for (Eigen::Index i = row; i < neq; ++i) {
    el.inconsistency = std::max(el.inconsistency, std::abs(r(i)));
    if (std::abs(r(i)) > 1e-9 * std::max(1.0, r.cwiseAbs().maxCoeff())) el.consistent = false;
  }
  el.free_index.assign(nparams, -1);
  for (std::size_t j = 0; j < nparams; ++j)
    if (!is_pivot[j]) {
      el.free_index[j] = static_cast<long>(el.free.size());
      el.free.push_back(j);
    }
  for (Eigen::Index i = 0; i < row; ++i) {
    std::vector<std::pair<std::size_t, double>> nz;
    for (std::size_t j : el.free) {
      const double v = a(i, static_cast<Eigen::Index>(j));
      if (std::abs(v) > 1e-14) nz.emplace_back(j, v);
    }
    el.rows.push_back(std::move(nz));
    el.rhs.push_back(r(i));
  }
  return el;
}

// Coefficients on the free parameters after substituting the pivots.
AffineLinear reduce(const AffineLinear& f, const Elimination& el) {
  AffineLinear out{f.constant, RealVector::Zero(static_cast<Eigen::Index>(el.free.size()))};
  for (std::size_t j = 0; j < el.free.size(); ++j)
    out.coeffs(static_cast<Eigen::Index>(j)) = f.coeffs(static_cast<Eigen::Index>(el.free[j]));
  for (std::size_t r = 0; r < el.pivots.size(); ++r) {
    const double lp = f.coeffs(static_cast<Eigen::Index>(el.pivots[r]));
    if (lp == 0.0) continue;
    out.constant += lp * el.rhs[r];
    for (const auto& [j, v] : el.rows[r]) out.coeffs(el.free_index[j]) -= lp * v;
  }
  return out;
}

AffineMatrix reduce(const AffineMatrix& f, const Elimination& el) {
  AffineMatrix out{f.size, f.constant, std::vector<TripList>(el.free.size())};
  for (std::size_t j = 0; j < el.free.size(); ++j) out.coeffs[j] = f.coeffs[el.free[j]];
  for (std::size_t r = 0; r < el.pivots.size(); ++r) {
    const TripList& fp = f.coeffs[el.pivots[r]];
    if (fp.empty()) continue;
    for (const auto& e : fp) out.constant(e.row, e.col) += el.rhs[r] * e.value;
    for (const auto& [j, v] : el.rows[r]) {
      TripList& dst = out.coeffs[static_cast<std::size_t>(el.free_index[j])];
      for (const auto& e : fp) dst.push_back({e.row, e.col, -v * e.value});
    }
  }
  for (auto& c : out.coeffs) combine(c);
  return out;
}

template <typename Scalar>
Scalar cast_scalar(Complex v) {
  if constexpr (std::is_same_v<Scalar, double>)
    return v.real();
  else
    return v;
}

struct Lowered {
  Layout layout;
  Elimination elim;
  AffineLinear objective;           // reduced
  std::vector<AffineMatrix> psd;    // reduced
  std::vector<AffineLinear> ineq;   // reduced, oriented as expr >= 0
  std::vector<std::size_t> ineq_source;  // index into linear_constraints()
};

Lowered lower(const SdpProblem& p) {
  Layout lay(p);
  const std::size_t np = lay.size();
  std::vector<AffineLinear> eqs;
  std::vector<AffineLinear> ineqs;
  std::vector<std::size_t> ineq_source;
  for (std::size_t i = 0; i < p.linear_constraints().size(); ++i) {
    const auto& c = p.linear_constraints()[i];
    AffineLinear a = lower_linear(p, lay, c.expr);
    if (c.relation == Relation::eq) {
      eqs.push_back(std::move(a));
      continue;
    }
    if (c.relation == Relation::leq) {
      a.constant = -a.constant;
      a.coeffs = -a.coeffs;
    }
    ineqs.push_back(std::move(a));
    ineq_source.push_back(i);
  }
  RealMatrix aeq(static_cast<Eigen::Index>(eqs.size()), static_cast<Eigen::Index>(np));
  RealVector req(static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    aeq.row(static_cast<Eigen::Index>(i)) = eqs[i].coeffs.transpose();
    req(static_cast<Eigen::Index>(i)) = -eqs[i].constant;
  }
  Elimination el = eliminate(std::move(aeq), std::move(req), np);

  Lowered lw{std::move(lay), std::move(el), {}, {}, {}, std::move(ineq_source)};
  lw.objective = reduce(lower_linear(p, lw.layout, p.objective()), lw.elim);
  for (const auto& c : p.psd_constraints()) lw.psd.push_back(reduce(lower_matrix(lw.layout, c.expr), lw.elim));
  for (const auto& a : ineqs) lw.ineq.push_back(reduce(a, lw.elim));
  return lw;
}

template <typename Scalar>
ConicProgram<Scalar> to_conic(const SdpProblem& p, const Lowered& lw) {
  ConicProgram<Scalar> prog;
  const auto m = static_cast<Eigen::Index>(lw.elim.free.size());
  prog.num_vars = m;
  prog.objective = p.sense() == Sense::maximize ? lw.objective.coeffs : RealVector(-lw.objective.coeffs);
  for (const auto& f : lw.psd) {
    LmiBlock<Scalar> blk;
    blk.size = f.size;
    blk.constant = f.constant.unaryExpr([](Complex v) { return cast_scalar<Scalar>(v); });
    blk.coeffs.resize(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < f.coeffs.size(); ++j)
      for (const auto& e : f.coeffs[j]) blk.coeffs[j].push_back({e.row, e.col, cast_scalar<Scalar>(-e.value)});
    prog.blocks.push_back(std::move(blk));
  }
  const auto nlp = static_cast<Eigen::Index>(lw.ineq.size());
  prog.lp_constant = RealVector(nlp);
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index i = 0; i < nlp; ++i) {
    const auto& a = lw.ineq[static_cast<std::size_t>(i)];
    prog.lp_constant(i) = a.constant;
    for (Eigen::Index j = 0; j < m; ++j)
      if (a.coeffs(j) != 0.0) trips.emplace_back(i, j, -a.coeffs(j));
  }
  prog.lp_matrix.resize(nlp, m);
  prog.lp_matrix.setFromTriplets(trips.begin(), trips.end());
  return prog;
}

std::map<std::string, HermitianOperator> assemble_variables(const SdpProblem& p, const Lowered& lw,
                                                            const RealVector& y_free) {
  const std::size_t np = lw.layout.size();
  RealVector y = RealVector::Zero(static_cast<Eigen::Index>(np));
  for (std::size_t j = 0; j < lw.elim.free.size(); ++j)
    y(static_cast<Eigen::Index>(lw.elim.free[j])) = y_free(static_cast<Eigen::Index>(j));
  for (std::size_t r = 0; r < lw.elim.pivots.size(); ++r) {
    double v = lw.elim.rhs[r];
    for (const auto& [j, c] : lw.elim.rows[r]) v -= c * y(static_cast<Eigen::Index>(j));
    y(static_cast<Eigen::Index>(lw.elim.pivots[r])) = v;
  }
  std::vector<ComplexMatrix> mats;
  for (const auto& v : p.variables()) mats.push_back(ComplexMatrix::Zero(v.side, v.side));
  for (std::size_t j = 0; j < np; ++j) {
    const auto& q = lw.layout.params[j];
    auto& m = mats[static_cast<std::size_t>(q.var)];
    const double v = y(static_cast<Eigen::Index>(j));
    switch (q.kind) {
      case ParamKind::diag:
        m(q.k, q.k) += v;
        break;
      case ParamKind::re:
        m(q.k, q.l) += v;
        m(q.l, q.k) += v;
        break;
      case ParamKind::im:
        m(q.k, q.l) += v * kI;
        m(q.l, q.k) -= v * kI;
        break;
    }
  }
  std::map<std::string, HermitianOperator> out;
  for (std::size_t i = 0; i < mats.size(); ++i) out.emplace(p.variables()[i].name, HermitianOperator(mats[i]));
  return out;
}

Status map_status(IpmStatus s) {
  switch (s) {
    case IpmStatus::optimal:
      return Status::optimal;
    case IpmStatus::lmi_infeasible:
      return Status::infeasible;
    case IpmStatus::lmi_unbounded:
      return Status::unbounded;
    default:
      return Status::inaccurate;
  }
}

// Solves `q` (possibly the embedding of the caller's problem) and fills values in the
// parametrization of q.
template <typename Scalar>
SdpOutcome solve_lowered(const SdpProblem& q, const SolveSettings& settings,
                         std::vector<Matrix<Scalar>>& psd_mult) {
  SdpOutcome out;
  const Lowered lw = lower(q);
  if (!lw.elim.consistent) {
    out.status = Status::infeasible;
    std::ostringstream msg;
    msg << "linear equalities are inconsistent (residual " << lw.elim.inconsistency << ")";
    out.reason = msg.str();
    return out;
  }
  const auto m = static_cast<Eigen::Index>(lw.elim.free.size());
  RealVector y_free = RealVector::Zero(m);
  const double sign = q.sense() == Sense::maximize ? 1.0 : -1.0;

  if (lw.psd.empty() && lw.ineq.empty()) {
    if (lw.objective.coeffs.size() > 0 && max_abs(lw.objective.coeffs) > 0) {
      out.status = Status::unbounded;
      out.reason = "objective depends on unconstrained parameters";
      return out;
    }
    out.status = Status::optimal;
    out.solutions = assemble_variables(q, lw, y_free);
    out.primal_value = out.dual_value = lw.objective.constant;
    return out;
  }

  ConicProgram<Scalar> prog = to_conic<Scalar>(q, lw);
  prog.objective_offset = sign * lw.objective.constant;
  IpmSettings ipm;
  ipm.gap_tol = settings.gap_tol;
  ipm.feas_tol = settings.feas_tol;
  ipm.max_iter = settings.max_iter;
  ipm.verbose = settings.verbose;
  const IpmResult<Scalar> r = solve_conic(prog, ipm);

  out.status = map_status(r.status);
  out.iterations = r.iterations;
  out.reason = r.message;
  out.solutions = assemble_variables(q, lw, r.y);
  out.primal_value = lw.objective.constant + sign * r.lmi_objective;
  out.dual_value = lw.objective.constant + sign * r.multiplier_objective;
  psd_mult = r.X;
  for (std::size_t i = 0; i < lw.ineq.size(); ++i) {
    const auto& name = q.linear_constraints()[lw.ineq_source[i]].name;
    out.linear_duals[name] = r.x(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace

SdpOutcome solve(const SdpProblem& p, const SolveSettings& settings) {
  p.validate();
  if (p.real_scalar_count() > kMaxRealScalars) {
    std::ostringstream msg;
    msg << "solve: problem has " << p.real_scalar_count() << " real scalars, limit is "
        << kMaxRealScalars;
    throw DomainError(msg.str());
  }

  SdpOutcome out;
  const bool complex_data = p.has_complex_data();
  if (complex_data && settings.embed) {
    const SdpProblem q = embed_complex(p);
    std::vector<RealMatrix> mult;
    SdpOutcome inner = solve_lowered<double>(q, settings, mult);
    out = inner;
    out.solutions.clear();
    out.psd_duals.clear();
    double worst_embed = 0.0;
    for (const auto& v : p.variables()) {
      const auto it = inner.solutions.find(v.name);
      if (it == inner.solutions.end()) continue;
      if (!v.hermitian) {
        out.solutions.emplace(v.name, it->second);
        continue;
      }
      double res = 0.0;
      const ComplexMatrix h = embedded_to_hermitian(it->second.matrix().real(), &res);
      worst_embed = std::max(worst_embed, res);
      out.solutions.emplace(v.name, HermitianOperator(h, 1.0));
    }
    for (std::size_t k = 0; k < mult.size(); ++k) {
      const auto& c = p.psd_constraints()[k];
      const RealMatrix& x = mult[k];
      if (x.rows() == 2 * c.expr.size) {
        const Eigen::Index n = c.expr.size;
        ComplexMatrix w(n, n);
        w.real() = x.topLeftCorner(n, n) + x.bottomRightCorner(n, n);
        w.imag() = x.bottomLeftCorner(n, n) - x.topRightCorner(n, n);
        out.psd_duals.emplace(c.name, HermitianOperator(w, 1.0));
      } else {
        out.psd_duals.emplace(c.name, HermitianOperator(x.cast<Complex>(), 1.0));
      }
    }
    // Structure rows added by the embedding are not constraints of p.
    for (auto it = out.linear_duals.begin(); it != out.linear_duals.end();) {
      bool known = false;
      for (const auto& c : p.linear_constraints()) known = known || c.name == it->first;
      it = known ? std::next(it) : out.linear_duals.erase(it);
    }
    if (out.status == Status::optimal && worst_embed > 1e-9) {
      out.status = Status::inaccurate;
      out.reason = "embedded solution is not block structured";
    }
  } else if (complex_data) {
    std::vector<ComplexMatrix> mult;
    out = solve_lowered<Complex>(p, settings, mult);
    for (std::size_t k = 0; k < mult.size(); ++k)
      out.psd_duals.emplace(p.psd_constraints()[k].name, HermitianOperator(mult[k], 1.0));
  } else {
    std::vector<RealMatrix> mult;
    out = solve_lowered<double>(p, settings, mult);
    for (std::size_t k = 0; k < mult.size(); ++k)
      out.psd_duals.emplace(p.psd_constraints()[k].name,
                            HermitianOperator(mult[k].cast<Complex>(), 1.0));
  }

  if (!out.solutions.empty()) {
    out.primal_value = evaluate(p, p.objective(), out.solutions);
    out.max_violation = max_constraint_violation(p, out.solutions);
  }
  out.gap = std::abs(out.primal_value - out.dual_value);
  if (out.status == Status::optimal) {
    const double scale = std::max({1.0, std::abs(out.primal_value), std::abs(out.dual_value)});
    if (out.max_violation > settings.feas_tol) {
      out.status = Status::inaccurate;
      std::ostringstream msg;
      msg << "constraint re-check failed (violation " << out.max_violation << ")";
      out.reason = msg.str();
    } else if (out.gap > settings.gap_tol * scale) {
      out.status = Status::inaccurate;
      std::ostringstream msg;
      msg << "duality gap " << out.gap << " above tolerance";
      out.reason = msg.str();
    }
  }
  return out;
}

}  // namespace pwf::sdp
