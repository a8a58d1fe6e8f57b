#pragma once

#include "pwf/types.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace pwf {

/// Local dimensions of a composite system; every factor is an odd prime.
class QuditDims {
 public:
  explicit QuditDims(std::vector<int> dims);
  static QuditDims uniform(int d, int copies);

  const std::vector<int>& dims() const { return dims_; }
  int subsystems() const { return static_cast<int>(dims_.size()); }
  Eigen::Index total_dim() const { return total_; }
  /// Number of phase-space points, the product of d_i^2.
  std::size_t point_count() const;

  QuditDims concat(const QuditDims& other) const;

  bool operator==(const QuditDims& o) const { return dims_ == o.dims_; }
  bool operator!=(const QuditDims& o) const { return dims_ != o.dims_; }

 private:
  std::vector<int> dims_;
  Eigen::Index total_ = 1;
};

/// One (a1, a2) pair per subsystem; a1 is the Z exponent, a2 the X exponent.
struct PhasePoint {
  std::vector<std::pair<int, int>> coords;

  /// Row-major index: a1 outer, a2 inner, subsystems left to right.
  std::size_t index(const QuditDims& dims) const;
  static PhasePoint from_index(std::size_t index, const QuditDims& dims);
  static PhasePoint origin(const QuditDims& dims);

  bool operator==(const PhasePoint& o) const { return coords == o.coords; }
};

struct BoostShift {
  ComplexMatrix X;  // X|j> = |j+1>
  ComplexMatrix Z;  // Z|j> = w^j |j>
};

BoostShift boost_shift(int d);

/// T_u = tau^{-a1 a2} Z^{a1} X^{a2}, tau = exp(i pi (d+1)/d).
ComplexMatrix weyl_operator(int a1, int a2, int d);
/// Tensor product of the single-subsystem Weyl operators.
ComplexMatrix weyl_operator(const PhasePoint& u, const QuditDims& dims);

/// Sparse view of a point operator: every column holds exactly one entry.
struct MonomialMatrix {
  std::vector<int> row;        // row index of the entry in column j
  std::vector<Complex> value;  // its value
};

/// The full family {A_u} for a fixed QuditDims, computed once.
class PhaseSpace {
 public:
  explicit PhaseSpace(QuditDims dims);

  /// Shared, write-once cache keyed by dims. Safe to call from any thread.
  static std::shared_ptr<const PhaseSpace> of(const QuditDims& dims);

  const QuditDims& dims() const { return dims_; }
  std::size_t size() const { return ops_.size(); }
  Eigen::Index dim() const { return dims_.total_dim(); }

  const HermitianOperator& point_operator(std::size_t index) const { return ops_[index]; }
  const HermitianOperator& point_operator(const PhasePoint& u) const;
  const MonomialMatrix& monomial(std::size_t index) const { return mono_[index]; }

  /// Re Tr[A_u H] using the monomial structure (O(dim) per point).
  double trace_with(std::size_t index, const ComplexMatrix& h) const;
  /// The vector (Re Tr[A_u H])_u in enumeration order.
  RealVector traces(const ComplexMatrix& h) const;

 private:
  QuditDims dims_;
  std::vector<HermitianOperator> ops_;
  std::vector<MonomialMatrix> mono_;
};

/// A_u for the given point (served from the cache).
const HermitianOperator& phase_point_operator(const PhasePoint& u, const QuditDims& dims);

struct AlgebraCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct SpectrumCheck {
  int d = 0;
  int plus_multiplicity = 0;
  int minus_multiplicity = 0;
  double max_eigenvalue_deviation = 0.0;  // distance of eigenvalues from {+1,-1}
  double max_spectrum_spread = 0.0;       // max over u of |spec(A_u) - spec(A_0)|
  bool passed = false;
};

struct AlgebraReport {
  QuditDims dims;
  std::vector<AlgebraCheck> checks;  // the six operator identities
  std::vector<SpectrumCheck> spectra;  // one per distinct local dimension
  bool all_passed() const;
};

/// Checks Hermiticity, (1/D) sum A_u = 1, Tr[A_u A_v] = D delta, Tr A_u = 1,
/// reconstruction of a random Hermitian operator, and transpose closure.
AlgebraReport verify_phase_point_algebra(const QuditDims& dims, std::uint64_t seed = 7,
                                         double tol = 1e-10);

/// Eigenvalue multiplicities of A_u for a single qudit of dimension d.
SpectrumCheck point_operator_spectrum(int d, double tol = 1e-10);

}  // namespace pwf
