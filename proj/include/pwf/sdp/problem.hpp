#pragma once

#include "pwf/types.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pwf::sdp {

enum class Sense { minimize, maximize };
enum class Relation { eq, geq, leq };  // expression (relation) 0

using VarId = int;

struct VariableSpec {
  std::string name;
  Eigen::Index side = 0;
  bool hermitian = true;  // complex Hermitian; otherwise real symmetric
};

/// const + sum_k Re Tr[M_k V_k]
struct LinearForm {
  struct Term {
    VarId var;
    ComplexMatrix coeff;
  };
  std::vector<Term> terms;
  double constant = 0.0;

  LinearForm() = default;
  explicit LinearForm(double c) : constant(c) {}
  LinearForm& add(VarId v, ComplexMatrix coeff);
  /// Re Tr[V] for an n x n variable.
  LinearForm& add_trace(VarId v, Eigen::Index side, double weight = 1.0);
  /// weight * s for a 1 x 1 variable s.
  LinearForm& add_scalar(VarId v, double weight = 1.0);
};

/// Hermitian matrix-valued affine expression:
///   constant + sum over terms of  weight V  |  weight B V B^dag  |  s M  (s a 1 x 1 real variable).
struct MatrixForm {
  enum class Kind { identity, congruence, scale };
  struct Term {
    Kind kind;
    VarId var;
    ComplexMatrix factor;  // B for congruence, M for scale, unused for identity
    double weight = 1.0;
  };
  Eigen::Index size = 0;
  ComplexMatrix constant;
  std::vector<Term> terms;

  explicit MatrixForm(Eigen::Index n = 0) : size(n), constant(ComplexMatrix::Zero(n, n)) {}
  explicit MatrixForm(ComplexMatrix c) : size(c.rows()), constant(std::move(c)) {}
  MatrixForm& add(VarId v, double weight = 1.0);
  MatrixForm& add_congruence(VarId v, ComplexMatrix b, double weight = 1.0);
  MatrixForm& add_scaled(VarId scalar_var, ComplexMatrix m);
};

struct PsdConstraint {
  std::string name;
  MatrixForm expr;  // expr >= 0
};

struct LinearConstraint {
  std::string name;
  LinearForm expr;
  Relation relation;
};

/// Total real scalar count accepted by solve().
inline constexpr Eigen::Index kMaxRealScalars = 10000;

/// Immutable once built; several solves may share one problem.
class SdpProblem {
 public:
  VarId add_variable(std::string name, Eigen::Index side, bool hermitian = true);
  VarId add_scalar(std::string name) { return add_variable(std::move(name), 1, false); }
  void set_objective(Sense sense, LinearForm objective);
  void add_psd(std::string name, MatrixForm expr);
  void add_linear(std::string name, LinearForm expr, Relation rel);

  const std::vector<VariableSpec>& variables() const { return vars_; }
  const VariableSpec& variable(VarId v) const;
  VarId find(const std::string& name) const;
  Sense sense() const { return sense_; }
  const LinearForm& objective() const { return objective_; }
  const std::vector<PsdConstraint>& psd_constraints() const { return psd_; }
  const std::vector<LinearConstraint>& linear_constraints() const { return lin_; }

  /// Real scalars in the parametrization: n^2 per Hermitian, n(n+1)/2 per real symmetric.
  Eigen::Index real_scalar_count() const;
  bool has_complex_data() const;

  /// Throws DomainError when a term references an unknown variable or a shape does not fit.
  void validate() const;

  /// Debug dump: variables, objective and constraints with matrices as nested [re, im] arrays.
  void dump_json(std::ostream& os) const;

 private:
  std::vector<VariableSpec> vars_;
  std::map<std::string, VarId> index_;
  Sense sense_ = Sense::minimize;
  LinearForm objective_;
  std::vector<PsdConstraint> psd_;
  std::vector<LinearConstraint> lin_;
};

/// Real-symmetric equivalent problem. A Hermitian n x n variable H = A + iB becomes a real
/// symmetric 2n x 2n variable [[A, -B], [B, A]] under the same name, with equalities tying
/// its blocks together; every complex matrix M in the data becomes [[Re M, -Im M], [Im M, Re M]].
SdpProblem embed_complex(const SdpProblem& p);

/// H = V11 + i V21 from an embedded 2n x 2n block. `residual` receives
/// max(|V11 - V22|, |V21 + V21^T|).
ComplexMatrix embedded_to_hermitian(const RealMatrix& v, double* residual = nullptr);
RealMatrix hermitian_to_embedded(const ComplexMatrix& h);

enum class Status { optimal, infeasible, unbounded, inaccurate };
const char* to_string(Status s);

struct SolveSettings {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 150;
  /// Solve through embed_complex (default) or with complex blocks directly.
  bool embed = true;
  bool verbose = false;
};

struct SdpOutcome {
  Status status = Status::inaccurate;
  double primal_value = 0.0;  // objective at the returned variables
  double dual_value = 0.0;    // Lagrangian bound from the multipliers
  double gap = 0.0;
  std::map<std::string, HermitianOperator> solutions;
  /// Multipliers of PSD constraints (PSD matrices) and of inequality rows (>= 0),
  /// keyed by constraint name. The Lagrangian is f - <W, expr> - sum lambda expr for min.
  std::map<std::string, HermitianOperator> psd_duals;
  std::map<std::string, double> linear_duals;
  /// Largest violation found by the independent constraint re-check.
  double max_violation = 0.0;
  int iterations = 0;
  std::string reason;

  bool optimal() const { return status == Status::optimal; }
};

SdpOutcome solve(const SdpProblem& p, const SolveSettings& settings = {});

double evaluate(const SdpProblem& p, const LinearForm& f,
                const std::map<std::string, HermitianOperator>& values);
ComplexMatrix evaluate(const SdpProblem& p, const MatrixForm& f,
                       const std::map<std::string, HermitianOperator>& values);

/// Largest violation of any constraint of p at the given variable values,
/// relative to 1 + the norm of the constraint's constant data.
double max_constraint_violation(const SdpProblem& p,
                                const std::map<std::string, HermitianOperator>& values);

}  // namespace pwf::sdp
