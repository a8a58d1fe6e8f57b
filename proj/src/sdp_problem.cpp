#include "pwf/sdp/problem.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <ostream>

namespace pwf::sdp {

LinearForm& LinearForm::add(VarId v, ComplexMatrix coeff) {
  terms.push_back({v, std::move(coeff)});
  return *this;
}

LinearForm& LinearForm::add_trace(VarId v, Eigen::Index side, double weight) {
  return add(v, weight * ComplexMatrix::Identity(side, side));
}

LinearForm& LinearForm::add_scalar(VarId v, double weight) {
  return add(v, ComplexMatrix::Constant(1, 1, weight));
}

MatrixForm& MatrixForm::add(VarId v, double weight) {
  terms.push_back({Kind::identity, v, ComplexMatrix(), weight});
  return *this;
}

MatrixForm& MatrixForm::add_congruence(VarId v, ComplexMatrix b, double weight) {
  terms.push_back({Kind::congruence, v, std::move(b), weight});
  return *this;
}

MatrixForm& MatrixForm::add_scaled(VarId scalar_var, ComplexMatrix m) {
  terms.push_back({Kind::scale, scalar_var, std::move(m), 1.0});
  return *this;
}

VarId SdpProblem::add_variable(std::string name, Eigen::Index side, bool hermitian) {
  if (side < 1) throw DomainError("SdpProblem: variable side must be positive");
  if (index_.count(name)) throw DomainError("SdpProblem: duplicate variable name " + name);
  const auto id = static_cast<VarId>(vars_.size());
  index_[name] = id;
  vars_.push_back({std::move(name), side, hermitian});
  return id;
}

void SdpProblem::set_objective(Sense sense, LinearForm objective) {
  sense_ = sense;
  objective_ = std::move(objective);
}

void SdpProblem::add_psd(std::string name, MatrixForm expr) {
  psd_.push_back({std::move(name), std::move(expr)});
}

void SdpProblem::add_linear(std::string name, LinearForm expr, Relation rel) {
  lin_.push_back({std::move(name), std::move(expr), rel});
}

const VariableSpec& SdpProblem::variable(VarId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= vars_.size())
    throw DomainError("SdpProblem: unknown variable id");
  return vars_[static_cast<std::size_t>(v)];
}

VarId SdpProblem::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw DomainError("SdpProblem: unknown variable " + name);
  return it->second;
}

Eigen::Index SdpProblem::real_scalar_count() const {
  Eigen::Index total = 0;
  for (const auto& v : vars_) total += v.hermitian ? v.side * v.side : v.side * (v.side + 1) / 2;
  return total;
}

namespace {

bool is_complex(const ComplexMatrix& m) { return m.size() > 0 && max_abs(m.imag()) > 0.0; }

bool form_is_complex(const SdpProblem& p, const MatrixForm& f) {
  if (is_complex(f.constant)) return true;
  for (const auto& t : f.terms)
    if (p.variable(t.var).hermitian || is_complex(t.factor)) return true;
  return false;
}

}  // namespace

bool SdpProblem::has_complex_data() const {
  for (const auto& v : vars_)
    if (v.hermitian) return true;
  for (const auto& c : psd_)
    if (form_is_complex(*this, c.expr)) return true;
  for (const auto& c : lin_)
    for (const auto& t : c.expr.terms)
      if (is_complex(t.coeff)) return true;
  return false;
}

void SdpProblem::validate() const {
  auto check_linear = [&](const LinearForm& f, const std::string& where) {
    for (const auto& t : f.terms) {
      const auto& v = variable(t.var);
      if (t.coeff.rows() != v.side || t.coeff.cols() != v.side)
        throw DomainError(where + ": coefficient shape does not match variable " + v.name);
    }
  };
  check_linear(objective_, "objective");
  for (const auto& c : lin_) check_linear(c.expr, "constraint " + c.name);
  for (const auto& c : psd_) {
    const auto& f = c.expr;
    const std::string where = "constraint " + c.name;
    if (f.constant.rows() != f.size || f.constant.cols() != f.size)
      throw DomainError(where + ": constant has wrong shape");
    if (max_abs(ComplexMatrix(f.constant - f.constant.adjoint())) > kHermitianTol)
      throw DomainError(where + ": constant is not Hermitian");
    for (const auto& t : f.terms) {
      const auto& v = variable(t.var);
      switch (t.kind) {
        case MatrixForm::Kind::identity:
          if (v.side != f.size) throw DomainError(where + ": variable " + v.name + " has wrong side");
          break;
        case MatrixForm::Kind::congruence:
          if (t.factor.rows() != f.size || t.factor.cols() != v.side)
            throw DomainError(where + ": congruence factor has wrong shape");
          break;
        case MatrixForm::Kind::scale:
          if (v.side != 1 || v.hermitian)
            throw DomainError(where + ": scale term needs a real 1x1 variable");
          if (t.factor.rows() != f.size || t.factor.cols() != f.size ||
              max_abs(ComplexMatrix(t.factor - t.factor.adjoint())) > kHermitianTol)
            throw DomainError(where + ": scale matrix must be Hermitian of the constraint size");
          break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Complex embedding

namespace {

RealMatrix emb(const ComplexMatrix& m) {
  const Eigen::Index r = m.rows(), c = m.cols();
  RealMatrix out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

// Selects the upper (part 0) or lower (part 1) copy in the doubled space.
RealMatrix copy_selector(Eigen::Index n, int part) {
  RealMatrix j = RealMatrix::Zero(2 * n, n);
  j.block(part * n, 0, n, n).setIdentity();
  return j;
}

LinearForm embed_linear(const SdpProblem& p, const LinearForm& f) {
  LinearForm out(f.constant);
  for (const auto& t : f.terms) {
    if (p.variable(t.var).hermitian)
      out.add(t.var, ComplexMatrix(emb(t.coeff).cast<Complex>() * 0.5));
    else
      out.add(t.var, ComplexMatrix(t.coeff.real().cast<Complex>()));
  }
  return out;
}

MatrixForm embed_matrix(const SdpProblem& p, const MatrixForm& f) {
  MatrixForm out(ComplexMatrix(emb(f.constant).cast<Complex>()));
  for (const auto& t : f.terms) {
    const auto& v = p.variable(t.var);
    switch (t.kind) {
      case MatrixForm::Kind::identity:
        if (v.hermitian) {
          out.add(t.var, t.weight);
        } else {
          for (int part = 0; part < 2; ++part)
            out.add_congruence(t.var, copy_selector(v.side, part).cast<Complex>(), t.weight);
        }
        break;
      case MatrixForm::Kind::congruence: {
        const RealMatrix eb = emb(t.factor);
        if (v.hermitian) {
          out.add_congruence(t.var, eb.cast<Complex>(), t.weight);
        } else {
          for (int part = 0; part < 2; ++part)
            out.add_congruence(t.var, RealMatrix(eb * copy_selector(v.side, part)).cast<Complex>(),
                               t.weight);
        }
        break;
      }
      case MatrixForm::Kind::scale:
        out.add_scaled(t.var, emb(t.factor).cast<Complex>());
        break;
    }
  }
  return out;
}

ComplexMatrix unit(Eigen::Index n, Eigen::Index r, Eigen::Index c) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

SdpProblem embed_complex(const SdpProblem& p) {
  p.validate();
  SdpProblem q;
  for (const auto& v : p.variables()) q.add_variable(v.name, v.hermitian ? 2 * v.side : v.side, false);
  q.set_objective(p.sense(), embed_linear(p, p.objective()));
  for (const auto& c : p.psd_constraints())
    q.add_psd(c.name, form_is_complex(p, c.expr) ? embed_matrix(p, c.expr) : c.expr);
  for (const auto& c : p.linear_constraints()) q.add_linear(c.name, embed_linear(p, c.expr), c.relation);

  // Block structure of each embedded variable: V11 = V22 and V21 antisymmetric.
  for (std::size_t id = 0; id < p.variables().size(); ++id) {
    const auto& v = p.variables()[id];
    if (!v.hermitian) continue;
    const Eigen::Index n = v.side, n2 = 2 * n;
    const auto var = static_cast<VarId>(id);
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = k; l < n; ++l) {
        // Re Tr[E_lk V] = V(k, l)
        LinearForm same;
        same.add(var, unit(n2, l, k) - unit(n2, n + l, n + k));
        q.add_linear(v.name + ":embed_diag", std::move(same), Relation::eq);
        LinearForm anti;
        anti.add(var, unit(n2, l, n + k) + unit(n2, k, n + l));
        q.add_linear(v.name + ":embed_offdiag", std::move(anti), Relation::eq);
      }
    }
  }
  return q;
}

ComplexMatrix embedded_to_hermitian(const RealMatrix& v, double* residual) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0)
    throw DomainError("embedded_to_hermitian: expected an even square matrix");
  const Eigen::Index n = v.rows() / 2;
  const RealMatrix a = v.topLeftCorner(n, n);
  const RealMatrix b = v.bottomLeftCorner(n, n);
  if (residual) {
    *residual = std::max(max_abs(RealMatrix(a - v.bottomRightCorner(n, n))),
                         max_abs(RealMatrix(b + b.transpose())));
  }
  ComplexMatrix h(n, n);
  h.real() = a;
  h.imag() = b;
  return h;
}

RealMatrix hermitian_to_embedded(const ComplexMatrix& h) { return emb(h); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

const ComplexMatrix& value_of(const SdpProblem& p, VarId v,
                              const std::map<std::string, HermitianOperator>& values) {
  const auto& spec = p.variable(v);
  const auto it = values.find(spec.name);
  if (it == values.end()) throw DomainError("missing value for variable " + spec.name);
  if (it->second.dim() != spec.side) throw DomainError("value for " + spec.name + " has wrong size");
  return it->second.matrix();
}

}  // namespace

double evaluate(const SdpProblem& p, const LinearForm& f,
                const std::map<std::string, HermitianOperator>& values) {
  double s = f.constant;
  for (const auto& t : f.terms) s += (t.coeff * value_of(p, t.var, values)).trace().real();
  return s;
}

ComplexMatrix evaluate(const SdpProblem& p, const MatrixForm& f,
                       const std::map<std::string, HermitianOperator>& values) {
  ComplexMatrix m = f.constant;
  for (const auto& t : f.terms) {
    const ComplexMatrix& v = value_of(p, t.var, values);
    switch (t.kind) {
      case MatrixForm::Kind::identity:
        m += t.weight * v;
        break;
      case MatrixForm::Kind::congruence:
        m += t.weight * t.factor * v * t.factor.adjoint();
        break;
      case MatrixForm::Kind::scale:
        m += v(0, 0).real() * t.factor;
        break;
    }
  }
  return m;
}

double max_constraint_violation(const SdpProblem& p,
                                const std::map<std::string, HermitianOperator>& values) {
  double data = 0.0;
  for (const auto& c : p.psd_constraints()) data += c.expr.constant.squaredNorm();
  for (const auto& c : p.linear_constraints()) data += c.expr.constant * c.expr.constant;
  const double scale = 1.0 + std::sqrt(data);

  double worst = 0.0;
  for (const auto& c : p.psd_constraints()) {
    const ComplexMatrix m = evaluate(p, c.expr, values);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues()(0));
  }
  for (const auto& c : p.linear_constraints()) {
    const double v = evaluate(p, c.expr, values);
    switch (c.relation) {
      case Relation::eq:
        worst = std::max(worst, std::abs(v));
        break;
      case Relation::geq:
        worst = std::max(worst, -v);
        break;
      case Relation::leq:
        worst = std::max(worst, v);
        break;
    }
  }
  return worst / scale;
}

// ---------------------------------------------------------------------------
// JSON dump

namespace {

nlohmann::json matrix_json(const ComplexMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json linear_json(const SdpProblem& p, const LinearForm& f) {
  nlohmann::json j;
  j["constant"] = f.constant;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : f.terms)
    j["terms"].push_back({{"var", p.variable(t.var).name}, {"coeff", matrix_json(t.coeff)}});
  return j;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::eq:
      return "eq";
    case Relation::geq:
      return "geq";
    case Relation::leq:
      return "leq";
  }
  return "?";
}

}  // namespace

void SdpProblem::dump_json(std::ostream& os) const {
  nlohmann::json j;
  j["sense"] = sense_ == Sense::minimize ? "min" : "max";
  j["variables"] = nlohmann::json::array();
  for (const auto& v : vars_)
    j["variables"].push_back({{"name", v.name}, {"side", v.side}, {"hermitian", v.hermitian}});
  j["objective"] = linear_json(*this, objective_);
  j["psd"] = nlohmann::json::array();
  for (const auto& c : psd_) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["size"] = c.expr.size;
    cj["constant"] = matrix_json(c.expr.constant);
    cj["terms"] = nlohmann::json::array();
    for (const auto& t : c.expr.terms) {
      nlohmann::json tj;
      tj["var"] = variable(t.var).name;
      tj["weight"] = t.weight;
      switch (t.kind) {
        case MatrixForm::Kind::identity:
          tj["kind"] = "identity";
          break;
        case MatrixForm::Kind::congruence:
          tj["kind"] = "congruence";
          tj["factor"] = matrix_json(t.factor);
          break;
        case MatrixForm::Kind::scale:
          tj["kind"] = "scale";
          tj["factor"] = matrix_json(t.factor);
          break;
      }
      cj["terms"].push_back(std::move(tj));
    }
    j["psd"].push_back(std::move(cj));
  }
  j["linear"] = nlohmann::json::array();
  for (const auto& c : lin_) {
    nlohmann::json cj = linear_json(*this, c.expr);
    cj["name"] = c.name;
    cj["relation"] = relation_name(c.relation);
    j["linear"].push_back(std::move(cj));
  }
  os << j.dump(2) << "\n";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::infeasible:
      return "infeasible";
    case Status::unbounded:
      return "unbounded";
    case Status::inaccurate:
      return "inaccurate";
  }
  return "?";
}

}  // namespace pwf::sdp
