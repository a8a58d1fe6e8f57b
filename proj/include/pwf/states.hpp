#pragma once

#include "pwf/phase_space.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace pwf {

/// Unit vector of amplitudes over a composite system.
class PureState {
 public:
  PureState(ComplexVector amplitudes, QuditDims dims, double tol = 1e-12);

  const ComplexVector& amplitudes() const { return amps_; }
  const QuditDims& dims() const { return dims_; }
  Eigen::Index dim() const { return amps_.size(); }

  HermitianOperator projector() const { return HermitianOperator::projector(amps_); }
  Complex overlap(const PureState& other) const { return amps_.dot(other.amps_); }

 private:
  ComplexVector amps_;
  QuditDims dims_;
};

/// PSD, unit-trace operator tagged with its subsystem structure.
class DensityOperator {
 public:
  DensityOperator(HermitianOperator op, QuditDims dims, double tol = 1e-10);
  explicit DensityOperator(const PureState& psi);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  const QuditDims& dims() const { return dims_; }
  Eigen::Index dim() const { return op_.dim(); }

  double purity() const;

 private:
  HermitianOperator op_;
  QuditDims dims_;
};

PureState strange_state();  // (|1> - |2>)/sqrt 2
PureState norell_state();   // (-|0> + 2|1> - |2>)/sqrt 6
PureState k_state();        // (|1> + |2>)/sqrt 2
PureState basis_state(int j, int d);

/// (1 - rho0)/(D - 1) for a pure rho0.
DensityOperator orthogonal_complement(const DensityOperator& rho0);

/// The d+1 mutually unbiased eigenbases of Z and X Z^a, d states each.
/// Bases are ordered Z first, then a = 0..d-1; within a basis by eigenvalue label.
std::vector<std::vector<PureState>> stabilizer_bases(int d);
std::vector<PureState> enumerate_stabilizer_states(int d);

/// Orthonormal list of vectors with the derived projector.
class Subspace {
 public:
  Subspace(std::vector<ComplexVector> basis, QuditDims dims, double tol = 1e-10);
  static Subspace from_states(const std::vector<PureState>& states);
  /// Support of a PSD operator: eigenvectors with eigenvalue above `tol`.
  static Subspace support(const HermitianOperator& op, const QuditDims& dims, double tol = 1e-9);

  const std::vector<ComplexVector>& basis() const { return basis_; }
  const QuditDims& dims() const { return dims_; }
  std::size_t size() const { return basis_.size(); }
  Eigen::Index ambient_dim() const { return dims_.total_dim(); }

  /// Columns are the basis vectors (ambient_dim x size).
  ComplexMatrix basis_matrix() const;
  const HermitianOperator& projector() const { return projector_; }
  Subspace complement() const;

 private:
  std::vector<ComplexVector> basis_;
  QuditDims dims_;
  HermitianOperator projector_;
};

/// Eigenspace of A_0 for eigenvalue `sign` (+1 or -1), orthonormalized in index order.
Subspace a0_eigenspace_basis(int d, int sign);

struct ExamplePair {
  std::vector<PureState> vectors;  // v0 .. v4
  DensityOperator rho0;
  DensityOperator rho1;
};

/// The five-dimensional pair built from v0..v4 (rho0 on v0,v1,v2; rho1 on v3,v4).
ExamplePair example_d5_pair();

/// Haar-random pure state on a single qudit or a composite system.
PureState random_pure_state(const QuditDims& dims, std::uint64_t seed);
PureState random_pure_state(int d, std::uint64_t seed);
/// Random mixed state G G^dag / Tr (Ginibre ensemble).
DensityOperator random_density(const QuditDims& dims, std::mt19937_64& rng);

inline constexpr Eigen::Index kTensorPowerGuard = 243;  // 3^5

DensityOperator tensor_power(const DensityOperator& rho, int n,
                             Eigen::Index guard = kTensorPowerGuard);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);

/// Phase fix: first amplitude with modulus above tol becomes real positive.
ComplexVector canonical_phase(ComplexVector v, double tol = 1e-12);

}  // namespace pwf
