#include "oracles.hpp"

#include "pwf/subspaces.hpp"

#include <doctest.h>

using namespace pwf;

namespace {

double weight_outside(const DensityOperator& rho, const Subspace& s) {
  const ComplexMatrix q = oracle::eye(rho.dim()) - s.projector().matrix();
  return (q * rho.matrix() * q).trace().real();
}

}  // namespace

TEST_CASE("max-min Wigner over the -1 eigenspace of A0 is -1/d") {
  for (int d : {3, 5, 7}) {
    const Subspace minus = a0_eigenspace_basis(d, -1);
    const MaxMinWigner r = max_min_wigner_over(minus);
    CHECK(std::abs(r.value + 1.0 / d) < 1e-7);
    CHECK(std::abs(r.dual_bound - r.value) < 1e-7);
    CHECK(weight_outside(r.argmax, minus) < 1e-9);
    // the optimizer's own value, recomputed from the definitions
    const RealVector w = oracle::wigner_direct(r.argmax.matrix(), {d});
    CHECK(std::abs(w.minCoeff() - r.value) < 1e-6);
  }
}

TEST_CASE("the +1 eigenspace of A0 is strongly unextendible") {
  for (int d : {3, 5, 7}) {
    const Subspace plus = a0_eigenspace_basis(d, +1);
    const ExtendibilityCertificate c = certify_strong_unextendibility(plus);
    CHECK(c.verdict == Verdict::unextendible);
    CHECK(std::abs(c.margin + 1.0 / d) < 1e-7);
    REQUIRE(c.strong.has_value());
    CHECK(*c.strong);
    CHECK(std::abs(c.strong_margin - 2.0 / (d + 1)) < 1e-6);
    REQUIRE(c.strong_witness.has_value());
    const DensityOperator& w = *c.strong_witness;
    CHECK(oracle::wigner_direct(w.matrix(), {d}).minCoeff() >= -1e-6);
    CHECK(weight_outside(w, plus) < 1e-9);
    const ComplexMatrix b = plus.basis_matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b.adjoint() * w.matrix() * b);
    CHECK(es.eigenvalues().minCoeff() > 1e-3);
  }
}

TEST_CASE("supports of the five-dimensional pair") {
  const ExamplePair pair = example_d5_pair();
  const Subspace s0 = Subspace::support(pair.rho0.op(), pair.rho0.dims());
  const Subspace s1 = Subspace::support(pair.rho1.op(), pair.rho1.dims());
  CHECK(std::abs(max_min_wigner_over(s1).value + 0.2) < 1e-7);
  const ExtendibilityCertificate c = certify_strong_unextendibility(s0);
  CHECK(c.verdict == Verdict::unextendible);
  CHECK(std::abs(c.margin + 0.2) < 1e-7);
  CHECK(c.strong.value_or(false));
  REQUIRE(c.strong_witness.has_value());
  CHECK(oracle::wigner_direct(c.strong_witness->matrix(), {5}).minCoeff() >= -1e-6);
  CHECK(weight_outside(*c.strong_witness, s0) < 1e-9);
}

TEST_CASE("a span of basis states is extendible by an exact witness") {
  const Subspace s = Subspace::from_states({basis_state(0, 3), basis_state(1, 3)});
  const ExtendibilityCertificate c = is_pwf_unextendible(s);
  CHECK(c.verdict == Verdict::extendible);
  CHECK(std::abs(c.margin) <= kVerdictDeadband);
  REQUIRE(c.witness.has_value());
  CHECK(oracle::wigner_direct(c.witness->matrix(), {3}).minCoeff() >= -1e-12);
  CHECK(weight_outside(*c.witness, s.complement()) < 1e-12);
  CHECK(c.method == "exact witness in complement");
}

TEST_CASE("a random one-dimensional subspace is extendible with a positive margin") {
  const Subspace s = Subspace::from_states({random_pure_state(5, 8)});
  const ExtendibilityCertificate c = is_pwf_unextendible(s);
  CHECK(c.verdict == Verdict::extendible);
  CHECK(c.margin > kVerdictDeadband);
  REQUIRE(c.witness.has_value());
  CHECK(oracle::wigner_direct(c.witness->matrix(), {5}).minCoeff() >= -1e-9);
  CHECK(weight_outside(*c.witness, s.complement()) < 1e-8);
}

TEST_CASE("subspaces spanning everything or nothing are rejected") {
  CHECK_THROWS_AS(is_pwf_unextendible(Subspace::from_states(stabilizer_bases(3)[0])), DomainError);
  CHECK_THROWS_AS(max_min_wigner_over(Subspace({}, QuditDims({3}))), DomainError);
  CHECK_THROWS_AS(certify_strong_unextendibility(Subspace::from_states({basis_state(0, 3)})), DomainError);
}

TEST_CASE("max-min Wigner over the full space and over a stabilizer span") {
  const Subspace full = Subspace::from_states(stabilizer_bases(3)[0]);
  CHECK(std::abs(max_min_wigner_over(full).value - 1.0 / 9.0) < 1e-7);
  const Subspace strange = Subspace::from_states({strange_state()});
  CHECK(std::abs(max_min_wigner_over(strange).value + 1.0 / 3.0) < 1e-7);
}

TEST_CASE("complements of stabilizer subsets have effect Wigner values in {0, 1}") {
  for (int d : {3, 5}) {
    for (const auto& basis : stabilizer_bases(d)) {
      for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
        std::vector<PureState> chosen;
        for (int j = 0; j < d; ++j)
          if (mask & (1u << j)) chosen.push_back(basis[static_cast<std::size_t>(j)]);
        const ExtendibilityCertificate c = stabilizer_basis_extendibility(chosen);
        CHECK(c.verdict == Verdict::extendible);
        REQUIRE(c.witness.has_value());
        ComplexMatrix perp = oracle::eye(d);
        for (const auto& s : chosen) perp -= s.projector().matrix();
        const RealVector we = oracle::wigner_direct(perp, {d}, false);
        for (Eigen::Index u = 0; u < we.size(); ++u)
          CHECK((std::abs(we(u)) <= 1e-8 || std::abs(we(u) - 1.0) <= 1e-8));
      }
    }
  }
}

TEST_CASE("stabilizer_basis_extendibility validates its input") {
  const auto z = stabilizer_bases(3)[0];
  CHECK_THROWS_AS(stabilizer_basis_extendibility({}), DomainError);
  CHECK_THROWS_AS(stabilizer_basis_extendibility(z), DomainError);
  CHECK_THROWS_AS(stabilizer_basis_extendibility({strange_state()}), DomainError);
  CHECK_THROWS_AS(stabilizer_basis_extendibility({z[0], stabilizer_bases(3)[1][0]}), DomainError);
}

TEST_CASE("clean_density removes negative eigenvalues and renormalizes") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 0.8;
  m(1, 1) = 0.4;
  m(2, 2) = -1e-9;
  const DensityOperator rho = clean_density(m, QuditDims({3}));
  CHECK(std::abs(rho.op().trace() - 1.0) < 1e-14);
  CHECK(rho.op().min_eigenvalue() >= 0.0);
  CHECK_THROWS_AS(clean_density(-oracle::eye(3), QuditDims({3})), NumericalError);
}
