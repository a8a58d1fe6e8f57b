#include "pwf/wigner.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace pwf {

WignerRepresentation wigner_of(const HermitianOperator& h, const QuditDims& dims, WignerRole role) {
  if (h.dim() != dims.total_dim()) throw DomainError("wigner_of: dimension mismatch");
  const auto space = PhaseSpace::of(dims);
  RealVector values = space->traces(h.matrix());
  if (role == WignerRole::state) values /= static_cast<double>(dims.total_dim());
  return {role, dims, std::move(values)};
}

WignerRepresentation wigner_of(const DensityOperator& rho) {
  return wigner_of(rho.op(), rho.dims(), WignerRole::state);
}

bool is_pwf(const WignerRepresentation& w, double tol) { return w.min_value() >= -tol; }

bool is_pwf(const HermitianOperator& h, const QuditDims& dims, WignerRole role, double tol) {
  return is_pwf(wigner_of(h, dims, role), tol);
}

double sum_negativity(const WignerRepresentation& w) {
  return -w.values.cwiseMin(0.0).sum();
}

NegativityReport negativity_report(const DensityOperator& rho, LogBase base) {
  const WignerRepresentation w = wigner_of(rho);
  NegativityReport r;
  Eigen::Index argmin = 0;
  r.min_value = w.values.minCoeff(&argmin);
  r.argmin_point = PhasePoint::from_index(static_cast<std::size_t>(argmin), w.dims);
  r.sum_negativity = sum_negativity(w);
  r.max_negativity = std::max(0.0, -r.min_value);
  const double m = std::log(2.0 * r.sum_negativity + 1.0);
  r.mana = base == LogBase::natural ? m : m / std::log(2.0);
  return r;
}

RealVector outcome_probability(const DensityOperator& rho,
                               const std::vector<HermitianOperator>& effects, double tol) {
  if (effects.empty()) throw DomainError("outcome_probability: empty POVM");
  const Eigen::Index dim = rho.dim();
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (const auto& e : effects) {
    if (e.dim() != dim) throw DomainError("outcome_probability: effect dimension mismatch");
    if (e.min_eigenvalue() < -tol) throw DomainError("outcome_probability: effect is not PSD");
    total += e.matrix();
  }
  if (max_abs(total - ComplexMatrix::Identity(dim, dim)) > tol)
    throw DomainError("outcome_probability: effects do not sum to the identity");

  const WignerRepresentation w = wigner_of(rho);
  RealVector p(static_cast<Eigen::Index>(effects.size()));
  for (std::size_t j = 0; j < effects.size(); ++j) {
    const WignerRepresentation we = wigner_of(effects[j], rho.dims(), WignerRole::effect);
    p(static_cast<Eigen::Index>(j)) = w.values.dot(we.values);
  }
  return p;
}

void write_wigner_csv(std::ostream& os, const WignerRepresentation& w) {
  const int n = w.dims.subsystems();
  for (int i = 1; i <= n; ++i) os << "a1_" << i << ",a2_" << i << ",";
  os << "value\n";
  os << std::setprecision(12);
  for (Eigen::Index idx = 0; idx < w.values.size(); ++idx) {
    const PhasePoint u = PhasePoint::from_index(static_cast<std::size_t>(idx), w.dims);
    for (const auto& [a1, a2] : u.coords) os << a1 << "," << a2 << ",";
    os << w.values(idx) << "\n";
  }
}

}  // namespace pwf
