#include "pwf/subspaces.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace pwf {

const char* to_string(Verdict v) { return v == Verdict::extendible ? "extendible" : "unextendible"; }

DensityOperator clean_density(const ComplexMatrix& m, const QuditDims& dims) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0);
  const RealVector lambda = es.eigenvalues().cwiseMax(0.0);
  if (lambda.sum() <= 0.0) throw NumericalError("clean_density: operator has no positive part");
  ComplexMatrix rho = es.eigenvectors() * (lambda / lambda.sum()).cast<Complex>().asDiagonal() *
                      es.eigenvectors().adjoint();
  return {HermitianOperator((rho + rho.adjoint()) / 2.0), dims};
}

namespace {

void require_optimal(const sdp::SdpOutcome& r, const char* what) {
  if (r.optimal()) return;
  std::ostringstream msg;
  msg << what << ": solver returned " << sdp::to_string(r.status) << " (" << r.reason << ")";
  throw SolverError(msg.str(), r.status);
}

// Wigner rows restricted to states of the form B sigma B^dag: Tr[A_u B sigma B^dag] = Tr[(B^dag A_u B) sigma].
std::vector<ComplexMatrix> compressed_point_operators(const ComplexMatrix& b, const QuditDims& dims) {
  const auto space = PhaseSpace::of(dims);
  std::vector<ComplexMatrix> out;
  out.reserve(space->size());
  for (std::size_t i = 0; i < space->size(); ++i)
    out.push_back(b.adjoint() * space->point_operator(i).matrix() * b);
  return out;
}

double outside_weight(const DensityOperator& rho, const Subspace& s) {
  // Norm of the part of rho living outside s.
  const Eigen::Index n = rho.dim();
  const ComplexMatrix q = ComplexMatrix::Identity(n, n) - s.projector().matrix();
  return (q * rho.matrix()).norm();
}

std::vector<PureState> stabilizer_candidates(const QuditDims& dims) {
  std::vector<PureState> out;
  double count = 1.0;
  for (int d : dims.dims()) count *= static_cast<double>(d) * (d + 1);
  if (count > 20000) return out;
  out = enumerate_stabilizer_states(dims.dims()[0]);
  for (std::size_t i = 1; i < dims.dims().size(); ++i) {
    const auto next = enumerate_stabilizer_states(dims.dims()[i]);
    std::vector<PureState> grown;
    for (const auto& a : out)
      for (const auto& b : next) grown.push_back(tensor(a, b));
    out = std::move(grown);
  }
  return out;
}

}  // namespace

MaxMinWigner max_min_wigner_over(const Subspace& k, const sdp::SolveSettings& settings) {
  if (k.size() < 1) throw DomainError("max_min_wigner_over: empty subspace");
  const QuditDims& dims = k.dims();
  const ComplexMatrix b = k.basis_matrix();
  const auto kd = static_cast<Eigen::Index>(k.size());
  const double inv_dim = 1.0 / static_cast<double>(dims.total_dim());

  sdp::SdpProblem p;
  const sdp::VarId sigma = p.add_variable("sigma", kd);
  const sdp::VarId t = p.add_scalar("t");
  p.add_psd("sigma>=0", sdp::MatrixForm(kd).add(sigma));
  p.add_linear("trace", sdp::LinearForm(-1.0).add_trace(sigma, kd), sdp::Relation::eq);
  const auto rows = compressed_point_operators(b, dims);
  for (std::size_t u = 0; u < rows.size(); ++u)
    p.add_linear("W(" + std::to_string(u) + ")>=t",
                 sdp::LinearForm().add(sigma, rows[u] * inv_dim).add_scalar(t, -1.0),
                 sdp::Relation::geq);
  p.set_objective(sdp::Sense::maximize, sdp::LinearForm().add_scalar(t));

  const sdp::SdpOutcome r = sdp::solve(p, settings);
  require_optimal(r, "max_min_wigner_over");
  const ComplexMatrix rho = b * r.solutions.at("sigma").matrix() * b.adjoint();
  return {r.primal_value, clean_density(rho, dims), r.dual_value};
}

ExtendibilityCertificate is_pwf_unextendible(const Subspace& s, const sdp::SolveSettings& settings) {
  if (s.size() >= static_cast<std::size_t>(s.ambient_dim()))
    throw DomainError("is_pwf_unextendible: subspace must be proper");
  const Subspace comp = s.complement();
  const MaxMinWigner mm = max_min_wigner_over(comp, settings);

  ExtendibilityCertificate cert;
  cert.margin = mm.value;
  cert.settings = settings;
  if (mm.value < -kVerdictDeadband) {
    cert.verdict = Verdict::unextendible;
    cert.method = "max-min Wigner over complement";
    return cert;
  }
  if (mm.value > kVerdictDeadband) {
    if (!is_pwf(wigner_of(mm.argmax), kPwfTol) || outside_weight(mm.argmax, comp) > kSupportTol)
      throw NumericalError("is_pwf_unextendible: optimizer failed independent re-check");
    cert.verdict = Verdict::extendible;
    cert.witness = mm.argmax;
    cert.method = "max-min Wigner over complement";
    return cert;
  }

  // Inside the deadband: accept only witnesses that are exactly PWF and supported in the complement.
  std::vector<DensityOperator> candidates;
  const Eigen::Index rest = comp.ambient_dim() - static_cast<Eigen::Index>(s.size());
  candidates.emplace_back(comp.projector() * (1.0 / static_cast<double>(rest)), s.dims());
  for (const auto& psi : stabilizer_candidates(s.dims()))
    if (s.projector().trace_with(psi.projector().matrix()) <= kSupportTol)
      candidates.emplace_back(psi);
  for (const auto& c : candidates) {
    if (!is_pwf(wigner_of(c), 1e-12) || outside_weight(c, comp) > kSupportTol) continue;
    cert.verdict = Verdict::extendible;
    cert.witness = c;
    cert.method = "exact witness in complement";
    return cert;
  }
  std::ostringstream msg;
  msg << "is_pwf_unextendible: margin " << mm.value << " lies inside the deadband +-"
      << kVerdictDeadband << " and no exact witness was found";
  throw InconclusiveError(msg.str());
}

ExtendibilityCertificate certify_strong_unextendibility(const Subspace& s,
                                                        const sdp::SolveSettings& settings) {
  ExtendibilityCertificate cert = is_pwf_unextendible(s, settings);
  if (cert.verdict != Verdict::unextendible)
    throw DomainError("certify_strong_unextendibility: subspace is PWF extendible");

  const QuditDims& dims = s.dims();
  const ComplexMatrix b = s.basis_matrix();
  const auto kd = static_cast<Eigen::Index>(s.size());
  const double inv_dim = 1.0 / static_cast<double>(dims.total_dim());

  sdp::SdpProblem p;
  const sdp::VarId sigma = p.add_variable("sigma", kd);
  const sdp::VarId t = p.add_scalar("t");
  p.add_psd("sigma>=t", sdp::MatrixForm(kd).add(sigma).add_scaled(t, -ComplexMatrix::Identity(kd, kd)));
  p.add_linear("trace", sdp::LinearForm(-1.0).add_trace(sigma, kd), sdp::Relation::eq);
  const auto rows = compressed_point_operators(b, dims);
  for (std::size_t u = 0; u < rows.size(); ++u)
    p.add_linear("W(" + std::to_string(u) + ")>=0", sdp::LinearForm().add(sigma, rows[u] * inv_dim),
                 sdp::Relation::geq);
  p.set_objective(sdp::Sense::maximize, sdp::LinearForm().add_scalar(t));

  const sdp::SdpOutcome r = sdp::solve(p, settings);
  require_optimal(r, "certify_strong_unextendibility");
  cert.strong_margin = r.primal_value;
  cert.method += "; full-support PWF search";
  if (r.primal_value <= kFullSupportThreshold) return cert;

  const DensityOperator w = clean_density(b * r.solutions.at("sigma").matrix() * b.adjoint(), dims);
  // Re-verify: PWF by our own Wigner evaluation, supported in S, full rank on S.
  const HermitianOperator restricted(b.adjoint() * w.matrix() * b, 1e-8);
  const bool ok = is_pwf(wigner_of(w), kSdpPwfTol) && outside_weight(w, s) <= kSupportTol &&
                  restricted.min_eigenvalue() > 0.0;
  if (!ok) return cert;
  cert.strong = true;
  cert.strong_witness = w;
  return cert;
}

ExtendibilityCertificate stabilizer_basis_extendibility(const std::vector<PureState>& states) {
  if (states.empty()) throw DomainError("stabilizer_basis_extendibility: empty state list");
  const QuditDims& dims = states.front().dims();
  if (dims.subsystems() != 1) throw DomainError("stabilizer_basis_extendibility: single qudit only");
  const int d = dims.dims()[0];
  if (static_cast<int>(states.size()) >= d)
    throw DomainError("stabilizer_basis_extendibility: need fewer than d states");

  const auto stabilizers = enumerate_stabilizer_states(d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].dims() == dims)) throw DomainError("stabilizer_basis_extendibility: mixed dims");
    bool known = false;
    for (const auto& s : stabilizers) known = known || std::abs(std::abs(s.overlap(states[i])) - 1.0) <= 1e-9;
    if (!known) throw DomainError("stabilizer_basis_extendibility: input is not a stabilizer state");
    if (!is_pwf(wigner_of(DensityOperator(states[i])), kPwfTol))
      throw DomainError("stabilizer_basis_extendibility: input state is not PWF");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(states[i].overlap(states[j])) > 1e-9)
        throw DomainError("stabilizer_basis_extendibility: states are not orthogonal");
  }

  ComplexMatrix rest = ComplexMatrix::Identity(d, d);
  for (const auto& s : states) rest -= s.projector().matrix();
  const HermitianOperator perp(rest);
  const WignerRepresentation we = wigner_of(perp, dims, WignerRole::effect);
  for (Eigen::Index u = 0; u < we.values.size(); ++u) {
    const double v = we.values(u);
    if (std::abs(v) > 1e-8 && std::abs(v - 1.0) > 1e-8)
      throw NumericalError("stabilizer_basis_extendibility: complement Wigner value outside {0, 1}");
  }
  ExtendibilityCertificate cert;
  cert.verdict = Verdict::extendible;
  cert.witness = DensityOperator(perp * (1.0 / perp.trace()), dims);
  cert.margin = wigner_of(*cert.witness).min_value();
  cert.method = "complement projector of stabilizer states";
  return cert;
}

}  // namespace pwf
