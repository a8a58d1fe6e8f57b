#include "pwf/types.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace pwf {

bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int f = 3; f * f <= d; f += 2)
    if (d % f == 0) return false;
  return true;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DomainError("HermitianOperator: matrix is not square");
  const double skew = max_abs(m - m.adjoint());
  if (skew > tol) {
    std::ostringstream msg;
    msg << "HermitianOperator: |M - M^dag|_max = " << skew << " exceeds " << tol;
    throw DomainError(msg.str());
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::projector(const ComplexVector& v) {
  return HermitianOperator(v * v.adjoint());
}

double HermitianOperator::trace_with(const ComplexMatrix& other) const {
  // Tr[A B] = sum_ij A_ij B_ji
  return (m_.transpose().cwiseProduct(other)).sum().real();
}

RealVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianOperator::min_eigenvalue() const { return eigenvalues()(0); }

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  return HermitianOperator(m_ + o.m_);
}
HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  return HermitianOperator(m_ - o.m_);
}
HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

double trace_norm(const HermitianOperator& h) { return h.eigenvalues().cwiseAbs().sum(); }

}  // namespace pwf
