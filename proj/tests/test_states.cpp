#include "oracles.hpp"

#include "pwf/states.hpp"

#include <doctest.h>

using namespace pwf;

TEST_CASE("named qutrit states are unit vectors") {
  for (const PureState& s : {strange_state(), norell_state(), k_state()}) CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-15);
  CHECK(std::abs(strange_state().overlap(k_state())) < 1e-15);
}

TEST_CASE("Strange state is the -1 eigenvector of the parity operator") {
  const ComplexVector s = strange_state().amplitudes();
  CHECK(max_abs(ComplexVector(oracle::parity(3) * s + s)) < 1e-15);
  const ComplexVector k = k_state().amplitudes();
  CHECK(max_abs(ComplexVector(oracle::parity(3) * k - k)) < 1e-15);
}

TEST_CASE("A0 eigenspaces have the expected dimensions and eigenvalues") {
  for (int d : {3, 5, 7}) {
    const Subspace plus = a0_eigenspace_basis(d, +1), minus = a0_eigenspace_basis(d, -1);
    CHECK(plus.size() == static_cast<std::size_t>((d + 1) / 2));
    CHECK(minus.size() == static_cast<std::size_t>((d - 1) / 2));
    const ComplexMatrix p = oracle::parity(d);
    for (const auto& v : plus.basis()) CHECK(max_abs(ComplexVector(p * v - v)) < 1e-12);
    for (const auto& v : minus.basis()) CHECK(max_abs(ComplexVector(p * v + v)) < 1e-12);
    const ComplexMatrix sum = plus.projector().matrix() + minus.projector().matrix();
    CHECK(max_abs(ComplexMatrix(sum - oracle::eye(d))) < 1e-12);
  }
  CHECK_THROWS_AS(a0_eigenspace_basis(3, 0), DomainError);
}

TEST_CASE("stabilizer states form d+1 mutually unbiased bases") {
  for (int d : {3, 5}) {
    const auto bases = stabilizer_bases(d);
    REQUIRE(bases.size() == static_cast<std::size_t>(d + 1));
    CHECK(enumerate_stabilizer_states(d).size() == static_cast<std::size_t>(d * (d + 1)));
    for (std::size_t a = 0; a < bases.size(); ++a)
      for (std::size_t b = 0; b < bases.size(); ++b)
        for (const auto& x : bases[a])
          for (const auto& y : bases[b]) {
            const double o = std::norm(x.overlap(y));
            if (a != b) {
              CHECK(std::abs(o - 1.0 / d) < 1e-12);
            } else {
              CHECK((std::abs(o) < 1e-12 || std::abs(o - 1.0) < 1e-12));
            }
          }
  }
}

TEST_CASE("random pure states are reproducible per seed") {
  const PureState a = random_pure_state(3, 42), b = random_pure_state(3, 42), c = random_pure_state(3, 43);
  CHECK(max_abs(ComplexVector(a.amplitudes() - b.amplitudes())) == 0.0);
  CHECK(max_abs(ComplexVector(a.amplitudes() - c.amplitudes())) > 1e-3);
  CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-14);
  const PureState two = random_pure_state(QuditDims({3, 3}), 5);
  CHECK(two.dim() == 9);
}

TEST_CASE("density operators reject invalid input") {
  const QuditDims q({3});
  ComplexMatrix m = ComplexMatrix::Identity(3, 3) / 3.0;
  CHECK_NOTHROW(DensityOperator(HermitianOperator(m), q));
  CHECK_THROWS_AS(DensityOperator(HermitianOperator(m * 2.0), q), DomainError);
  ComplexMatrix neg = m;
  neg(0, 0) = -0.1;
  neg(1, 1) = 0.7666666666666667;
  CHECK_THROWS_AS(DensityOperator(HermitianOperator(neg), q), DomainError);
  ComplexMatrix skew = m;
  skew(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(HermitianOperator{skew}, DomainError);
  CHECK_THROWS_AS(DensityOperator(HermitianOperator(m), QuditDims({5})), DomainError);
}

TEST_CASE("orthogonal complement of a pure qutrit state") {
  const DensityOperator rho(strange_state());
  const DensityOperator sigma = orthogonal_complement(rho);
  CHECK(std::abs((rho.matrix() * sigma.matrix()).trace()) < 1e-15);
  CHECK(std::abs(sigma.purity() - 0.5) < 1e-14);
}

TEST_CASE("subspaces: support, complement and projector") {
  const ExamplePair pair = example_d5_pair();
  const Subspace s0 = Subspace::support(pair.rho0.op(), pair.rho0.dims());
  const Subspace s1 = Subspace::support(pair.rho1.op(), pair.rho1.dims());
  CHECK(s0.size() == 3);
  CHECK(s1.size() == 2);
  CHECK(max_abs(ComplexMatrix(s0.projector().matrix() * s1.projector().matrix())) < 1e-10);
  const Subspace c = s0.complement();
  CHECK(c.size() == 2);
  CHECK(max_abs(ComplexMatrix(c.projector().matrix() - s1.projector().matrix())) < 1e-10);
  const ComplexMatrix b = s0.basis_matrix();
  CHECK(max_abs(ComplexMatrix(b.adjoint() * b - oracle::eye(3))) < 1e-12);
  CHECK_THROWS_AS(Subspace({ComplexVector::Ones(3), ComplexVector::Ones(3)}, QuditDims({3})), DomainError);
}

TEST_CASE("tensor powers respect the dimension guard") {
  const DensityOperator s(strange_state());
  CHECK(tensor_power(s, 3).dim() == 27);
  CHECK(tensor_power(s, 2).dims() == QuditDims({3, 3}));
  CHECK_THROWS_AS(tensor_power(s, 6), DomainError);
  CHECK_THROWS_AS(tensor_power(s, 3, 9), DomainError);
  const PureState ab = tensor(strange_state(), k_state());
  CHECK(max_abs(ComplexMatrix(DensityOperator(ab).matrix() -
                              oracle::kron(s.matrix(), DensityOperator(k_state()).matrix()))) < 1e-15);
}

TEST_CASE("canonical phase makes the leading amplitude real positive") {
  ComplexVector v(3);
  v << Complex(0, 0), Complex(0, -1) / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0);
  const ComplexVector c = canonical_phase(v);
  CHECK(std::abs(c(1) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(c(2) + std::sqrt(0.5)) < 1e-15);
}
