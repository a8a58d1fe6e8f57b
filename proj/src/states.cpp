#include "pwf/states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace pwf {

namespace {

QuditDims qutrit() { return QuditDims({3}); }

ComplexVector vec3(double a, double b, double c) {
  ComplexVector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

ComplexVector canonical_phase(ComplexVector v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return v;
}

PureState::PureState(ComplexVector amplitudes, QuditDims dims, double tol)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (amps_.size() != dims_.total_dim())
    throw DomainError("PureState: amplitude count does not match dims");
  if (std::abs(amps_.norm() - 1.0) > tol) throw DomainError("PureState: vector is not normalized");
}

DensityOperator::DensityOperator(HermitianOperator op, QuditDims dims, double tol)
    : op_(std::move(op)), dims_(std::move(dims)) {
  if (op_.dim() != dims_.total_dim())
    throw DomainError("DensityOperator: matrix dimension does not match dims");
  if (std::abs(op_.trace() - 1.0) > tol) throw DomainError("DensityOperator: trace is not 1");
  if (op_.min_eigenvalue() < -tol) throw DomainError("DensityOperator: not positive semidefinite");
}

DensityOperator::DensityOperator(const PureState& psi)
    : DensityOperator(psi.projector(), psi.dims()) {}

double DensityOperator::purity() const { return op_.trace_with(op_.matrix()); }

PureState strange_state() { return {vec3(0, 1, -1) / std::sqrt(2.0), qutrit()}; }
PureState norell_state() { return {vec3(-1, 2, -1) / std::sqrt(6.0), qutrit()}; }
PureState k_state() { return {vec3(0, 1, 1) / std::sqrt(2.0), qutrit()}; }

PureState basis_state(int j, int d) {
  if (j < 0 || j >= d) throw DomainError("basis_state: index out of range");
  ComplexVector v = ComplexVector::Zero(d);
  v(j) = 1.0;
  return {v, QuditDims({d})};
}

DensityOperator orthogonal_complement(const DensityOperator& rho0) {
  if (std::abs(rho0.purity() - 1.0) > 1e-8)
    throw DomainError("orthogonal_complement: input state is not pure");
  const Eigen::Index dim = rho0.dim();
  const ComplexMatrix rest = ComplexMatrix::Identity(dim, dim) - rho0.matrix();
  return {HermitianOperator(rest / static_cast<double>(dim - 1)), rho0.dims()};
}

std::vector<std::vector<PureState>> stabilizer_bases(int d) {
  if (!is_odd_prime(d)) throw DomainError("stabilizer_bases: dimension must be an odd prime");
  const QuditDims dims({d});
  std::vector<std::vector<PureState>> bases;
  std::vector<PureState> computational;
  for (int j = 0; j < d; ++j) computational.push_back(basis_state(j, d));
  bases.push_back(std::move(computational));
  // psi_j = w^{b j + a j(j-1)/2} / sqrt d is the X Z^a eigenvector for eigenvalue w^{-b}.
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < d; ++a) {
    std::vector<PureState> basis;
    for (int b = 0; b < d; ++b) {
      ComplexVector v(d);
      for (int j = 0; j < d; ++j) {
        const long e = (static_cast<long>(b) * j + static_cast<long>(a) * (j * (j - 1) / 2)) % d;
        v(j) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(e) / d);
      }
      basis.emplace_back(canonical_phase(v), dims);
    }
    bases.push_back(std::move(basis));
  }
  return bases;
}

std::vector<PureState> enumerate_stabilizer_states(int d) {
  std::vector<PureState> all;
  for (auto& basis : stabilizer_bases(d))
    for (auto& s : basis) all.push_back(std::move(s));
  return all;
}

Subspace::Subspace(std::vector<ComplexVector> basis, QuditDims dims, double tol)
    : basis_(std::move(basis)), dims_(std::move(dims)) {
  const Eigen::Index dim = dims_.total_dim();
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (const auto& v : basis_) {
    if (v.size() != dim) throw DomainError("Subspace: vector length does not match dims");
    p += v * v.adjoint();
  }
  const ComplexMatrix b = basis_matrix();
  const ComplexMatrix gram = b.adjoint() * b;
  if (max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols())) > tol)
    throw DomainError("Subspace: basis is not orthonormal");
  projector_ = HermitianOperator(p);
}

Subspace Subspace::from_states(const std::vector<PureState>& states) {
  if (states.empty()) throw DomainError("Subspace: empty state list");
  std::vector<ComplexVector> vs;
  for (const auto& s : states) vs.push_back(s.amplitudes());
  return {std::move(vs), states.front().dims()};
}

Subspace Subspace::support(const HermitianOperator& op, const QuditDims& dims, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op.matrix());
  std::vector<ComplexVector> vs;
  for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;)
    if (es.eigenvalues()(i) > tol) vs.push_back(canonical_phase(es.eigenvectors().col(i)));
  return {std::move(vs), dims};
}

ComplexMatrix Subspace::basis_matrix() const {
  ComplexMatrix b(ambient_dim(), static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) b.col(static_cast<Eigen::Index>(i)) = basis_[i];
  return b;
}

Subspace Subspace::complement() const {
  const Eigen::Index dim = ambient_dim();
  const ComplexMatrix rest = ComplexMatrix::Identity(dim, dim) - projector_.matrix();
  return support(HermitianOperator(rest), dims_, 0.5);
}

namespace {

// Modified Gram-Schmidt over the columns of a projector, in index order.
std::vector<ComplexVector> orthonormal_columns(const ComplexMatrix& p, double tol = 1e-8) {
  std::vector<ComplexVector> out;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    ComplexVector v = p.col(j);
    for (const auto& q : out) v -= q.dot(v) * q;
    for (const auto& q : out) v -= q.dot(v) * q;
    const double n = v.norm();
    if (n > tol) out.push_back(canonical_phase(v / n));
  }
  return out;
}

}  // namespace

Subspace a0_eigenspace_basis(int d, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("a0_eigenspace_basis: sign must be +1 or -1");
  const QuditDims dims({d});
  const ComplexMatrix a0 = PhaseSpace::of(dims)->point_operator(0).matrix();
  const ComplexMatrix proj = (ComplexMatrix::Identity(d, d) + sign * a0) / 2.0;
  return {orthonormal_columns(proj), dims};
}

ExamplePair example_d5_pair() {
  const QuditDims dims({5});
  auto make = [&](std::initializer_list<double> amps, double scale) {
    ComplexVector v(5);
    Eigen::Index i = 0;
    for (double a : amps) v(i++) = a * scale;
    return PureState(v, dims);
  };
  std::vector<PureState> v{make({1, 0, 0, 0, 0}, 1.0), make({0, 1, 1, 1, 1}, 0.5),
                           make({0, -1, 1, 1, -1}, 0.5), make({0, 1, -1, 1, -1}, 0.5),
                           make({0, 1, 1, -1, -1}, 0.5)};
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (std::abs(v[i].overlap(v[j]) - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw NumericalError("example_d5_pair: vectors are not orthonormal");
  const ComplexMatrix r0 =
      (v[0].projector().matrix() + v[1].projector().matrix() + v[2].projector().matrix()) / 3.0;
  const ComplexMatrix r1 = (v[3].projector().matrix() + v[4].projector().matrix()) / 2.0;
  return {v, DensityOperator(HermitianOperator(r0), dims),
          DensityOperator(HermitianOperator(r1), dims)};
}

PureState random_pure_state(const QuditDims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexVector v(dims.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return {v / v.norm(), dims};
}

PureState random_pure_state(int d, std::uint64_t seed) {
  return random_pure_state(QuditDims({d}), seed);
}

DensityOperator random_density(const QuditDims& dims, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const Eigen::Index n = dims.total_dim();
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {HermitianOperator(rho, 1e-9), dims};
}

DensityOperator tensor_power(const DensityOperator& rho, int n, Eigen::Index guard) {
  if (n < 1) throw DomainError("tensor_power: exponent must be positive");
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(rho.dim());
  if (total > static_cast<double>(guard)) {
    std::ostringstream msg;
    msg << "tensor_power: dimension " << total << " exceeds guard " << guard;
    throw DomainError(msg.str());
  }
  DensityOperator out = rho;
  for (int i = 1; i < n; ++i) out = tensor(out, rho);
  return out;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return {kron(a.op(), b.op()), a.dims().concat(b.dims())};
}

PureState tensor(const PureState& a, const PureState& b) {
  const ComplexMatrix k = kron(ComplexMatrix(a.amplitudes()), ComplexMatrix(b.amplitudes()));
  return {ComplexVector(k.col(0)), a.dims().concat(b.dims())};
}

}  // namespace pwf
