#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Raised when an argument violates a documented precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot reach a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTol = 1e-10;

/// Largest absolute entry of `m`.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_odd_prime(int d);

/// Dense complex Hermitian matrix. Construction symmetrizes after checking
/// that the input is Hermitian to within `tol` in the max norm.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m, double tol = kHermitianTol);

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator projector(const ComplexVector& v);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

  /// Re Tr[this * other].
  double trace_with(const ComplexMatrix& other) const;
  double trace() const { return m_.trace().real(); }

  /// Ascending eigenvalues.
  RealVector eigenvalues() const;
  double min_eigenvalue() const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;

 private:
  ComplexMatrix m_;
};

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const HermitianOperator& h);

}  // namespace pwf
