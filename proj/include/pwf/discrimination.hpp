#pragma once

#include "pwf/subspaces.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pwf {

/// Default bound on the total dimension of n-copy (plus ancilla) instances: three qutrits.
inline constexpr Eigen::Index kCopyGuard = 27;

/// Two states with priors p and 1-p, discriminated on n copies.
class DiscriminationInstance {
 public:
  DiscriminationInstance(DensityOperator rho0, DensityOperator rho1, double prior = 0.5,
                         int copies = 1, Eigen::Index guard = kCopyGuard);

  const DensityOperator& rho0() const { return rho0_; }
  const DensityOperator& rho1() const { return rho1_; }
  double prior() const { return prior_; }
  int copies() const { return copies_; }

  /// rho_i^{(x) n}, built on each call.
  DensityOperator state0() const;
  DensityOperator state1() const;
  QuditDims dims() const;

 private:
  DensityOperator rho0_, rho1_;
  double prior_;
  int copies_;
  Eigen::Index guard_;
};

struct PovmPair {
  HermitianOperator E0, E1;
  double min_wigner = 0.0;  // smallest effect-Wigner value over both effects
  bool pwf = false;         // min_wigner >= -kSdpPwfTol

  /// {E0, 1 - E0}; throws DomainError unless both effects are >= -tol.
  static PovmPair complete(const HermitianOperator& e0, const QuditDims& dims, double tol = 1e-9);
};

/// Point of the dual program: V, U >= 0, a, b >= 0 with
///   V - U + (1-p) rho1 - p rho0 - sum_u (a_u - b_u) A_u >= 0,  value = p - Tr V - sum_u b_u.
struct DualCertificate {
  HermitianOperator V, U;
  RealVector a, b;
  double value = 0.0;
  double slack_min_eigenvalue = 0.0;  // of the matrix that must be PSD
  double min_multiplier = 0.0;        // min over eig(V), eig(U), a, b

  bool feasible(double tol = 1e-7) const {
    return slack_min_eigenvalue >= -tol && min_multiplier >= -tol;
  }
};

/// Recomputes value, slack and multiplier signs from V, U, a, b.
DualCertificate make_dual_certificate(const DiscriminationInstance& inst, HermitianOperator v,
                                      HermitianOperator u, RealVector a, RealVector b);

/// Error probability p Tr[E1 rho0] + (1-p) Tr[E0 rho1] of a POVM on the instance.
double error_probability(const DiscriminationInstance& inst, const PovmPair& povm);

struct MinErrorResult {
  sdp::Status status = sdp::Status::inaccurate;
  std::string reason;
  double value = 0.0;       // primal optimum
  double dual_bound = 0.0;  // solver's Lagrangian bound
  double gap = 0.0;
  PovmPair povm;
  DualCertificate certificate;  // assembled from the solver multipliers
  bool ok() const { return status == sdp::Status::optimal; }
};

/// min p + Tr[E0 ((1-p) rho1 - p rho0)] over PWF POVMs {E0, 1 - E0}.
MinErrorResult min_error_pwf(const DiscriminationInstance& inst, const sdp::SolveSettings& settings = {});

struct DualResult {
  sdp::Status status = sdp::Status::inaccurate;
  std::string reason;
  double value = 0.0;
  DualCertificate certificate;
  bool ok() const { return status == sdp::Status::optimal; }
};

/// The dual maximization over (V, U, a, b) solved as its own program.
DualResult min_error_dual_pwf(const DiscriminationInstance& inst, const sdp::SolveSettings& settings = {});

struct AnalyticSolution {
  DiscriminationInstance instance;
  PovmPair povm;
  DualCertificate certificate;
  double primal_value = 0.0;  // error of the POVM
  double expected = 0.0;      // 1 / 2^{n+1}
};

/// Closed-form optimum for the Strange state against its orthogonal complement at p = 1/2:
/// E0 = (|K><K| + |S><S|)^{(x) n}, V = (2^n - 1) rho0^{(x) n} / 2^{n+1}, U = 0, b = 0.
AnalyticSolution strange_pair_analytic(int n);

/// Multipliers a_u of the analytic dual point, built by expanding the tensor products.
RealVector strange_pair_dual_weights(int n);

/// The Strange state and its orthogonal complement.
DiscriminationInstance strange_pair(int copies = 1, double prior = 0.5);

struct UnambiguousResult {
  double value = 0.0;       // max Tr[E rho_target]
  double dual_bound = 0.0;
  bool identifiable = false;  // value > kUnambiguousThreshold
  std::optional<HermitianOperator> effect;
  std::string method;
};

inline constexpr double kUnambiguousThreshold = 1e-7;

/// max Tr[E rho_target] s.t. 0 <= E <= 1, W(E|u) >= 0, Tr[E rho_other] = 0. The last
/// constraint is imposed by writing E = B sigma B^dag with B a basis of ker(rho_other).
UnambiguousResult unambiguous_pwf_feasible(const DiscriminationInstance& inst, int target,
                                           const sdp::SolveSettings& settings = {});

double helstrom_error(const DensityOperator& rho0, const DensityOperator& rho1, double p = 0.5);

struct Norms {
  double all = 0.0;  // || p rho0 - (1-p) rho1 ||_1
  double pwf = 0.0;  // 1 - 2 P_e over PWF POVMs
};

Norms distinguishability_norms(const DiscriminationInstance& inst, const sdp::SolveSettings& settings = {});
Norms distinguishability_norms(const DensityOperator& rho, const DensityOperator& sigma, double p = 0.5);

/// norm_all / norm_pwf; throws DomainError when norm_pwf <= 1e-9.
double data_hiding_ratio(const DiscriminationInstance& inst, const sdp::SolveSettings& settings = {});
double data_hiding_ratio(const DensityOperator& rho, const DensityOperator& sigma, double p = 0.5);

struct RobustnessResult {
  double value = 0.0;
  HermitianOperator E0, N0;
};

/// min r such that some Helstrom-optimal {E0, E1} plus noise {N0, r 1 - N0} (N0 >= 0) has
/// nonnegative effect-Wigner values. Equal priors.
RobustnessResult pwf_robustness_of_optimal_measurement(const DensityOperator& rho,
                                                       const DensityOperator& sigma,
                                                       const sdp::SolveSettings& settings = {});

/// min_error_pwf on (rho0^{(x) n} (x) tau^{(x) k}, rho1^{(x) n} (x) tau^{(x) k}).
MinErrorResult magic_assisted_min_error(const DiscriminationInstance& inst, const DensityOperator& tau,
                                        int k, const sdp::SolveSettings& settings = {});

struct ExperimentRow {
  std::uint64_t seed = 0;
  double sum_negativity = 0.0;
  double robustness = 0.0;
  double ratio = 0.0;
  std::string status;  // "ok" or the failure reason
};

/// Row i uses seed + i: a Haar-random qutrit pure state against its orthogonal complement.
/// Rows are computed on a bounded worker pool and returned in seed order.
std::vector<ExperimentRow> robustness_experiment(int pairs, std::uint64_t seed, unsigned threads = 0);

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pwf
