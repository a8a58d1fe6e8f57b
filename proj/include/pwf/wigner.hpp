#pragma once

#include "pwf/states.hpp"

#include <iosfwd>
#include <vector>

namespace pwf {

/// States carry the 1/D normalization, effects do not. The role is fixed at
/// construction; there is no implicit switch between the two.
enum class WignerRole { state, effect };

struct WignerRepresentation {
  WignerRole role;
  QuditDims dims;
  RealVector values;  // indexed by PhasePoint::index

  double min_value() const { return values.minCoeff(); }
  double at(const PhasePoint& u) const { return values(static_cast<Eigen::Index>(u.index(dims))); }
};

/// W(u) = Tr[A_u H] / D for states, Tr[A_u H] for effects.
WignerRepresentation wigner_of(const HermitianOperator& h, const QuditDims& dims, WignerRole role);
WignerRepresentation wigner_of(const DensityOperator& rho);

inline constexpr double kPwfTol = 1e-9;
/// Looser threshold applied to operators that come out of an SDP solve.
inline constexpr double kSdpPwfTol = 1e-6;

bool is_pwf(const WignerRepresentation& w, double tol = kPwfTol);
bool is_pwf(const HermitianOperator& h, const QuditDims& dims, WignerRole role,
            double tol = kPwfTol);

enum class LogBase { natural, two };

struct NegativityReport {
  double sum_negativity = 0.0;
  double max_negativity = 0.0;
  double mana = 0.0;
  double min_value = 0.0;
  PhasePoint argmin_point;
};

/// sn, maxneg and mana = log(2 sn + 1).
NegativityReport negativity_report(const DensityOperator& rho, LogBase base = LogBase::natural);
double sum_negativity(const WignerRepresentation& w);

/// sum_u W_rho(u) W(E_j|u) for each effect. Effects must form a POVM.
RealVector outcome_probability(const DensityOperator& rho,
                               const std::vector<HermitianOperator>& effects, double tol = 1e-9);

/// Columns a1_1,a2_1,...,a1_n,a2_n,value; values with 12 significant digits.
void write_wigner_csv(std::ostream& os, const WignerRepresentation& w);

}  // namespace pwf
