#include "pwf/sdp/problem.hpp"
#include "pwf/states.hpp"
#include "pwf/wigner.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>
#include <sstream>

using namespace pwf;
using namespace pwf::sdp;

namespace {

ComplexMatrix eye(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

// 0 <= E <= 1 on a d-dimensional space with objective sense and coefficient.
SdpProblem effect_box(Eigen::Index d, Sense sense, const ComplexMatrix& coeff) {
  SdpProblem p;
  const VarId e = p.add_variable("E", d);
  p.add_psd("E>=0", MatrixForm(d).add(e));
  p.add_psd("1-E>=0", MatrixForm(eye(d)).add(e, -1.0));
  p.set_objective(sense, LinearForm().add(e, coeff));
  return p;
}

ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

double positive_part(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  return es.eigenvalues().cwiseMax(0.0).sum();
}

}  // namespace

TEST_CASE("trace of an effect is minimized at zero") {
  const SdpOutcome r = solve(effect_box(3, Sense::minimize, eye(3)));
  REQUIRE(r.status == Status::optimal);
  CHECK(r.primal_value == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-7));
  CHECK(std::abs(r.primal_value) < 1e-7);
  CHECK(r.gap <= 1e-8);
}

TEST_CASE("maximizing the trace of an effect gives the dimension") {
  const SdpOutcome r = solve(effect_box(3, Sense::maximize, eye(3)));
  REQUIRE(r.status == Status::optimal);
  CHECK(std::abs(r.primal_value - 3.0) < 1e-7);
  CHECK(max_abs(ComplexMatrix(r.solutions.at("E").matrix() - eye(3))) < 1e-6);
}

TEST_CASE("positive part of a random Hermitian matrix, embedded and native") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const ComplexMatrix h = random_hermitian(d, rng);
    const double expected = positive_part(h);
    SolveSettings native;
    native.embed = false;
    const SdpOutcome a = solve(effect_box(d, Sense::maximize, h));
    const SdpOutcome b = solve(effect_box(d, Sense::maximize, h), native);
    REQUIRE(a.status == Status::optimal);
    REQUIRE(b.status == Status::optimal);
    CHECK(std::abs(a.primal_value - expected) < 1e-7);
    CHECK(std::abs(b.primal_value - expected) < 1e-7);
    CHECK(std::abs(a.primal_value - b.primal_value) < 1e-7);
    // weak duality for a max problem: dual bound above primal value
    CHECK(a.dual_value >= a.primal_value - 1e-8);
    CHECK(a.max_violation <= 1e-8);
  }
}

TEST_CASE("equality constrained state with minimal overlap") {
  // min Re Tr[H rho] s.t. rho >= 0, Tr rho = 1 gives the smallest eigenvalue of H.
  std::mt19937_64 rng(5);
  const ComplexMatrix h = random_hermitian(4, rng);
  SdpProblem p;
  const VarId rho = p.add_variable("rho", 4);
  p.add_psd("rho>=0", MatrixForm(4).add(rho));
  p.add_linear("trace", LinearForm(-1.0).add_trace(rho, 4), Relation::eq);
  p.set_objective(Sense::minimize, LinearForm().add(rho, h));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  for (bool embed : {true, false}) {
    SolveSettings s;
    s.embed = embed;
    const SdpOutcome r = solve(p, s);
    REQUIRE(r.status == Status::optimal);
    CHECK(std::abs(r.primal_value - es.eigenvalues()(0)) < 1e-7);
    CHECK(std::abs(r.solutions.at("rho").trace() - 1.0) < 1e-8);
  }
}

TEST_CASE("congruence and scale terms") {
  // max t s.t. B X B^dag - t 1 >= 0 ... with X = 1 fixed by equalities reduces to lambda_min(B B^dag).
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  ComplexMatrix b(3, 2);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) b(i, j) = Complex(g(rng), g(rng));
  // max t s.t. B B^dag + sigma - t 1 >= 0 with sigma on a 2-dim range, 0 <= sigma <= 1
  SdpProblem p;
  const VarId s = p.add_variable("sigma", 2);
  const VarId t = p.add_scalar("t");
  p.add_psd("sigma>=0", MatrixForm(2).add(s));
  p.add_psd("sigma<=1", MatrixForm(eye(2)).add(s, -1.0));
  p.add_psd("lmi", MatrixForm(3).add_congruence(s, b).add_scaled(t, -eye(3)));
  p.set_objective(Sense::maximize, LinearForm().add_scalar(t));
  // B sigma B^dag has rank <= 2 in dimension 3, so t* = 0.
  const SdpOutcome r = solve(p);
  REQUIRE(r.status == Status::optimal);
  CHECK(std::abs(r.primal_value) < 1e-7);
}

TEST_CASE("real problems stay real") {
  SdpProblem p;
  const VarId x = p.add_scalar("x");
  p.add_linear("x<=2", LinearForm(-2.0).add_scalar(x), Relation::leq);
  p.add_linear("x>=0", LinearForm().add_scalar(x), Relation::geq);
  p.set_objective(Sense::maximize, LinearForm().add_scalar(x));
  CHECK_FALSE(p.has_complex_data());
  const SdpOutcome r = solve(p);
  REQUIRE(r.status == Status::optimal);
  CHECK(std::abs(r.primal_value - 2.0) < 1e-7);
  CHECK(r.linear_duals.at("x<=2") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infeasible and unbounded problems") {
  SUBCASE("negative trace for a PSD variable") {
    SdpProblem p;
    const VarId e = p.add_variable("E", 3);
    p.add_psd("E>=0", MatrixForm(3).add(e));
    p.add_linear("trace", LinearForm(1.0).add_trace(e, 3), Relation::eq);
    p.set_objective(Sense::minimize, LinearForm().add_trace(e, 3));
    const SdpOutcome r = solve(p);
    CHECK(r.status == Status::infeasible);
    CHECK_FALSE(r.reason.empty());
  }
  SUBCASE("unbounded trace") {
    SdpProblem p;
    const VarId e = p.add_variable("E", 2);
    p.add_psd("E>=0", MatrixForm(2).add(e));
    p.set_objective(Sense::maximize, LinearForm().add_trace(e, 2));
    const SdpOutcome r = solve(p);
    CHECK(r.status == Status::unbounded);
  }
  SUBCASE("inconsistent equalities") {
    SdpProblem p;
    const VarId x = p.add_scalar("x");
    p.add_linear("a", LinearForm(-1.0).add_scalar(x), Relation::eq);
    p.add_linear("b", LinearForm(-2.0).add_scalar(x), Relation::eq);
    p.set_objective(Sense::minimize, LinearForm().add_scalar(x));
    CHECK(solve(p).status == Status::infeasible);
  }
}

TEST_CASE("iteration limit is never reported as optimal") {
  SolveSettings s;
  s.max_iter = 2;
  const SdpOutcome r = solve(effect_box(3, Sense::minimize, eye(3)), s);
  CHECK(r.status == Status::inaccurate);
}

TEST_CASE("embedding of an identity variable") {
  SdpProblem p;
  const VarId e = p.add_variable("E", 2);
  p.add_psd("E>=0", MatrixForm(2).add(e));
  p.set_objective(Sense::minimize, LinearForm().add_trace(e, 2));
  const SdpProblem q = embed_complex(p);
  REQUIRE(q.variables().size() == 1);
  CHECK(q.variables()[0].side == 4);
  CHECK_FALSE(q.variables()[0].hermitian);
  CHECK(q.psd_constraints()[0].expr.size == 4);
  // objective 1/2 emb(1) = 1/2 * 1_4
  const ComplexMatrix& c = q.objective().terms[0].coeff;
  CHECK(max_abs(ComplexMatrix(c - 0.5 * eye(4))) < 1e-15);
  CHECK_FALSE(q.has_complex_data());
  CHECK(max_abs(ComplexMatrix(hermitian_to_embedded(eye(3)).cast<Complex>() - eye(6))) == 0.0);
}

TEST_CASE("embedding preserves positivity on random Hermitian matrices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian(3, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> a(h);
    Eigen::SelfAdjointEigenSolver<RealMatrix> b(hermitian_to_embedded(h));
    CHECK(std::abs(a.eigenvalues()(0) - b.eigenvalues()(0)) < 1e-10);
    double res = 1.0;
    const ComplexMatrix back = embedded_to_hermitian(hermitian_to_embedded(h), &res);
    CHECK(res <= 1e-12);
    CHECK(max_abs(ComplexMatrix(back - h)) < 1e-15);
  }
}

TEST_CASE("objective preserved between embedded and native solves of a random feasible problem") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix c = random_hermitian(3, rng);
    const ComplexMatrix b = random_hermitian(3, rng);
    SdpProblem p;
    const VarId x = p.add_variable("X", 3);
    p.add_psd("X>=0", MatrixForm(3).add(x));
    p.add_psd("X<=2", MatrixForm(ComplexMatrix(2.0 * eye(3))).add(x, -1.0));
    p.add_linear("b", LinearForm(-0.5).add(x, b), Relation::leq);
    p.set_objective(Sense::minimize, LinearForm().add(x, c));
    SolveSettings native;
    native.embed = false;
    const SdpOutcome r1 = solve(p);
    const SdpOutcome r2 = solve(p, native);
    REQUIRE(r1.status == Status::optimal);
    REQUIRE(r2.status == Status::optimal);
    CHECK(std::abs(r1.primal_value - r2.primal_value) < 1e-7);
    // re-check of the returned point by the independent evaluator
    CHECK(max_constraint_violation(p, r1.solutions) <= 1e-8);
  }
}

TEST_CASE("problem dump is valid JSON with nested matrices") {
  std::ostringstream os;
  effect_box(2, Sense::minimize, eye(2)).dump_json(os);
  const std::string s = os.str();
  CHECK(s.find("\"psd\"") != std::string::npos);
  CHECK(s.find("\"variables\"") != std::string::npos);
  CHECK(s.find("[\n") != std::string::npos);
}

TEST_CASE("malformed problems are rejected") {
  SdpProblem p;
  const VarId e = p.add_variable("E", 2);
  p.add_psd("bad", MatrixForm(3).add(e));
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS(p.add_variable("E", 2), DomainError);
}

TEST_CASE("a large objective constant does not spoil the gap check") {
  // min 1000 + Tr[E (H - 1000/3)] over effects: the constant cancels the variable part, so the
  // relative gap has to be measured on the full objective.
  std::mt19937_64 rng(4);
  const ComplexMatrix h = random_hermitian(3, rng);
  const ComplexMatrix shifted = h - eye(3) * (1000.0 / 3.0);
  SdpProblem p = effect_box(3, Sense::minimize, shifted);
  p.set_objective(Sense::minimize, LinearForm(1000.0).add(p.find("E"), shifted));
  const SdpOutcome r = solve(p);
  REQUIRE(r.status == Status::optimal);
  CHECK(std::abs(r.primal_value - h.trace().real()) < 1e-6);
}
