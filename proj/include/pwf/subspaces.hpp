#pragma once

#include "pwf/sdp/problem.hpp"
#include "pwf/wigner.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pwf {

/// Raised when a margin falls inside the verdict deadband and no exact witness settles it.
class InconclusiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when an SDP does not return an optimal status.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, sdp::Status status)
      : NumericalError(what), status_(status) {}
  sdp::Status status() const { return status_; }

 private:
  sdp::Status status_;
};

inline constexpr double kVerdictDeadband = 1e-7;
inline constexpr double kFullSupportThreshold = 1e-7;
/// Largest admissible weight of a witness outside its subspace.
inline constexpr double kSupportTol = 1e-8;

enum class Verdict { extendible, unextendible };
const char* to_string(Verdict v);

struct ExtendibilityCertificate {
  Verdict verdict = Verdict::unextendible;
  /// Optimal min-Wigner value over the complement. For the stabilizer-basis check it is
  /// the min Wigner value of the witness (a lower bound on the optimum).
  double margin = 0.0;
  std::optional<DensityOperator> witness;
  /// Full-support PWF witness found (true) or not settled (empty).
  std::optional<bool> strong;
  double strong_margin = 0.0;  // optimal t of the full-support search
  std::optional<DensityOperator> strong_witness;
  std::string method;
  sdp::SolveSettings settings;
};

struct MaxMinWigner {
  double value = 0.0;
  DensityOperator argmax;
  double dual_bound = 0.0;
};

/// max t s.t. rho = B sigma B^dag, sigma >= 0, Tr sigma = 1, W_rho(u) >= t, with B a basis map of K.
MaxMinWigner max_min_wigner_over(const Subspace& k, const sdp::SolveSettings& settings = {});

/// Extendible iff some PWF state is supported in the complement of S.
ExtendibilityCertificate is_pwf_unextendible(const Subspace& s,
                                             const sdp::SolveSettings& settings = {});

/// Searches for a PWF state with full support on S (max t with sigma >= t 1). The subspace
/// must be unextendible; a positive optimum above kFullSupportThreshold sets strong = true.
ExtendibilityCertificate certify_strong_unextendibility(const Subspace& s,
                                                        const sdp::SolveSettings& settings = {});

/// Orthonormal stabilizer states psi_1..psi_n (n < d) on one qudit: the complement projector has
/// effect-Wigner values in {0, 1}, so its normalization is a PWF witness.
ExtendibilityCertificate stabilizer_basis_extendibility(const std::vector<PureState>& states);

/// Nearest density operator: Hermitian part, negative eigenvalues clipped, trace renormalized.
DensityOperator clean_density(const ComplexMatrix& m, const QuditDims& dims);

}  // namespace pwf
