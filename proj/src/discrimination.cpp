#include "pwf/discrimination.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace pwf {

namespace {

ComplexMatrix eye(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

std::string point_name(const char* prefix, std::size_t u) {
  return std::string(prefix) + "(" + std::to_string(u) + ")";
}

void require_optimal(sdp::Status status, const std::string& reason, const char* what) {
  if (status == sdp::Status::optimal) return;
  std::ostringstream msg;
  msg << what << ": solver returned " << sdp::to_string(status) << " (" << reason << ")";
  throw SolverError(msg.str(), status);
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

DiscriminationInstance::DiscriminationInstance(DensityOperator rho0, DensityOperator rho1, double prior,
                                               int copies, Eigen::Index guard)
    : rho0_(std::move(rho0)), rho1_(std::move(rho1)), prior_(prior), copies_(copies), guard_(guard) {
  if (!(rho0_.dims() == rho1_.dims())) throw DomainError("DiscriminationInstance: dims differ");
  if (!(prior > 0.0 && prior < 1.0)) throw DomainError("DiscriminationInstance: prior must lie in (0, 1)");
  if (copies < 1) throw DomainError("DiscriminationInstance: copies must be positive");
  double total = 1.0;
  for (int i = 0; i < copies; ++i) total *= static_cast<double>(rho0_.dim());
  if (total > static_cast<double>(guard)) {
    std::ostringstream msg;
    msg << "DiscriminationInstance: total dimension " << total << " exceeds guard " << guard;
    throw DomainError(msg.str());
  }
}

DensityOperator DiscriminationInstance::state0() const { return tensor_power(rho0_, copies_, guard_); }
DensityOperator DiscriminationInstance::state1() const { return tensor_power(rho1_, copies_, guard_); }

QuditDims DiscriminationInstance::dims() const {
  QuditDims out = rho0_.dims();
  for (int i = 1; i < copies_; ++i) out = out.concat(rho0_.dims());
  return out;
}

PovmPair PovmPair::complete(const HermitianOperator& e0, const QuditDims& dims, double tol) {
  const Eigen::Index n = e0.dim();
  if (n != dims.total_dim()) throw DomainError("PovmPair: dimension mismatch");
  PovmPair p{e0, HermitianOperator(eye(n) - e0.matrix()), 0.0, false};
  if (p.E0.min_eigenvalue() < -tol || p.E1.min_eigenvalue() < -tol)
    throw DomainError("PovmPair: effect is not positive semidefinite");
  p.min_wigner = std::min(wigner_of(p.E0, dims, WignerRole::effect).min_value(),
                          wigner_of(p.E1, dims, WignerRole::effect).min_value());
  p.pwf = p.min_wigner >= -kSdpPwfTol;
  return p;
}

double error_probability(const DiscriminationInstance& inst, const PovmPair& povm) {
  const double p = inst.prior();
  return p * inst.state0().op().trace_with(povm.E1.matrix()) +
         (1.0 - p) * inst.state1().op().trace_with(povm.E0.matrix());
}

namespace {

ComplexMatrix cost_operator(const DiscriminationInstance& inst) {
  const double p = inst.prior();
  return (1.0 - p) * inst.state1().matrix() - p * inst.state0().matrix();
}

}  // namespace

DualCertificate make_dual_certificate(const DiscriminationInstance& inst, HermitianOperator v,
                                      HermitianOperator u, RealVector a, RealVector b) {
  const QuditDims dims = inst.dims();
  const auto space = PhaseSpace::of(dims);
  if (a.size() != static_cast<Eigen::Index>(space->size()) || b.size() != a.size())
    throw DomainError("make_dual_certificate: one multiplier per phase point required");
  ComplexMatrix slack = v.matrix() - u.matrix() + cost_operator(inst);
  for (std::size_t i = 0; i < space->size(); ++i) {
    const double w = a(static_cast<Eigen::Index>(i)) - b(static_cast<Eigen::Index>(i));
    if (w != 0.0) slack -= w * space->point_operator(i).matrix();
  }
  DualCertificate c{std::move(v), std::move(u), std::move(a), std::move(b), 0.0, 0.0, 0.0};
  c.value = inst.prior() - c.V.trace() - c.b.sum();
  c.slack_min_eigenvalue = min_eigenvalue(slack);
  c.min_multiplier = std::min({c.V.min_eigenvalue(), c.U.min_eigenvalue(), c.a.minCoeff(), c.b.minCoeff()});
  return c;
}

MinErrorResult min_error_pwf(const DiscriminationInstance& inst, const sdp::SolveSettings& settings) {
  const QuditDims dims = inst.dims();
  const Eigen::Index n = dims.total_dim();
  const auto space = PhaseSpace::of(dims);

  sdp::SdpProblem prob;
  const sdp::VarId e = prob.add_variable("E0", n);
  prob.add_psd("E0>=0", sdp::MatrixForm(n).add(e));
  prob.add_psd("1-E0>=0", sdp::MatrixForm(eye(n)).add(e, -1.0));
  for (std::size_t u = 0; u < space->size(); ++u) {
    const ComplexMatrix& a = space->point_operator(u).matrix();
    prob.add_linear(point_name("W0", u), sdp::LinearForm().add(e, a), sdp::Relation::geq);
    prob.add_linear(point_name("W1", u), sdp::LinearForm(1.0).add(e, -a), sdp::Relation::geq);
  }
  prob.set_objective(sdp::Sense::minimize, sdp::LinearForm(inst.prior()).add(e, cost_operator(inst)));

  const sdp::SdpOutcome r = sdp::solve(prob, settings);
  MinErrorResult out;
  out.status = r.status;
  out.reason = r.reason;
  out.value = r.primal_value;
  out.dual_bound = r.dual_value;
  out.gap = r.gap;
  if (r.solutions.empty()) return out;

  const bool optimal = r.optimal();
  out.povm = PovmPair::complete(r.solutions.at("E0"), dims,
                                optimal ? 1e-9 : std::numeric_limits<double>::infinity());
  RealVector a(static_cast<Eigen::Index>(space->size())), b(a.size());
  for (std::size_t u = 0; u < space->size(); ++u) {
    a(static_cast<Eigen::Index>(u)) = r.linear_duals.at(point_name("W0", u));
    b(static_cast<Eigen::Index>(u)) = r.linear_duals.at(point_name("W1", u));
  }
  out.certificate = make_dual_certificate(inst, r.psd_duals.at("1-E0>=0"), r.psd_duals.at("E0>=0"),
                                          std::move(a), std::move(b));
  if (optimal) {
    const double achieved = error_probability(inst, out.povm);
    if (std::abs(achieved - out.value) > 1e-6 || !out.povm.pwf) {
      out.status = sdp::Status::inaccurate;
      out.reason = "returned POVM does not reproduce the optimum";
    }
  }
  return out;
}

DualResult min_error_dual_pwf(const DiscriminationInstance& inst, const sdp::SolveSettings& settings) {
  const QuditDims dims = inst.dims();
  const Eigen::Index n = dims.total_dim();
  const auto space = PhaseSpace::of(dims);
  const std::size_t points = space->size();

  sdp::SdpProblem prob;
  const sdp::VarId v = prob.add_variable("V", n);
  const sdp::VarId u = prob.add_variable("U", n);
  std::vector<sdp::VarId> a(points), b(points);
  for (std::size_t i = 0; i < points; ++i) {
    a[i] = prob.add_scalar(point_name("a", i));
    b[i] = prob.add_scalar(point_name("b", i));
  }
  prob.add_psd("V>=0", sdp::MatrixForm(n).add(v));
  prob.add_psd("U>=0", sdp::MatrixForm(n).add(u));
  sdp::MatrixForm slack(cost_operator(inst));
  slack.add(v).add(u, -1.0);
  sdp::LinearForm objective(inst.prior());
  objective.add_trace(v, n, -1.0);
  for (std::size_t i = 0; i < points; ++i) {
    const ComplexMatrix& au = space->point_operator(i).matrix();
    slack.add_scaled(a[i], -au).add_scaled(b[i], au);
    prob.add_linear(point_name("a>=0", i), sdp::LinearForm().add_scalar(a[i]), sdp::Relation::geq);
    prob.add_linear(point_name("b>=0", i), sdp::LinearForm().add_scalar(b[i]), sdp::Relation::geq);
    objective.add_scalar(b[i], -1.0);
  }
  prob.add_psd("slack>=0", std::move(slack));
  prob.set_objective(sdp::Sense::maximize, std::move(objective));

  const sdp::SdpOutcome r = sdp::solve(prob, settings);
  DualResult out;
  out.status = r.status;
  out.reason = r.reason;
  out.value = r.primal_value;
  if (r.solutions.empty()) return out;
  RealVector av(static_cast<Eigen::Index>(points)), bv(av.size());
  for (std::size_t i = 0; i < points; ++i) {
    av(static_cast<Eigen::Index>(i)) = r.solutions.at(point_name("a", i)).matrix()(0, 0).real();
    bv(static_cast<Eigen::Index>(i)) = r.solutions.at(point_name("b", i)).matrix()(0, 0).real();
  }
  out.certificate = make_dual_certificate(inst, r.solutions.at("V"), r.solutions.at("U"),
                                          std::move(av), std::move(bv));
  return out;
}

DiscriminationInstance strange_pair(int copies, double prior) {
  const DensityOperator rho0(strange_state());
  return {rho0, orthogonal_complement(rho0), prior, copies};
}

RealVector strange_pair_dual_weights(int n) {
  if (n < 1 || n > 3) throw DomainError("strange_pair_dual_weights: n must be 1, 2 or 3");
  const QuditDims dims = QuditDims::uniform(3, n);
  const std::size_t points = dims.point_count();
  RealVector w = RealVector::Zero(static_cast<Eigen::Index>(points));
  const double norm = std::pow(2.0, 2 * n + 1);
  for (std::size_t idx = 0; idx < points; ++idx) {
    const PhasePoint u = PhasePoint::from_index(idx, dims);
    for (unsigned k = 0; k < (1u << n); ++k) {
      const int weight = std::popcount(k);
      if (weight % 2 == 0) continue;  // 1 - (-1)^{|k|} vanishes
      bool fits = true;
      for (int j = 0; j < n; ++j)
        if ((k >> j) & 1u) fits = fits && u.coords[static_cast<std::size_t>(j)] == std::pair<int, int>{0, 0};
      if (fits) w(static_cast<Eigen::Index>(idx)) += 2.0 / std::pow(3.0, n - weight) / norm;
    }
  }
  return w;
}

AnalyticSolution strange_pair_analytic(int n) {
  if (n < 1 || n > 3) throw DomainError("strange_pair_analytic: n must be 1, 2 or 3");
  DiscriminationInstance inst = strange_pair(n);
  const QuditDims dims = inst.dims();
  const HermitianOperator local = k_state().projector() + strange_state().projector();
  HermitianOperator e = local;
  for (int i = 1; i < n; ++i) e = kron(e, local);
  PovmPair povm = PovmPair::complete(e, dims);

  const double two_n = std::pow(2.0, n);
  const HermitianOperator v = inst.state0().op() * ((two_n - 1.0) / (2.0 * two_n));
  const Eigen::Index dim = dims.total_dim();
  const RealVector a = strange_pair_dual_weights(n);
  DualCertificate cert = make_dual_certificate(inst, v, HermitianOperator(ComplexMatrix::Zero(dim, dim)), a,
                                               RealVector::Zero(a.size()));
  const double primal = error_probability(inst, povm);
  return {std::move(inst), std::move(povm), std::move(cert), primal, 1.0 / (2.0 * two_n)};
}

UnambiguousResult unambiguous_pwf_feasible(const DiscriminationInstance& inst, int target,
                                           const sdp::SolveSettings& settings) {
  if (target != 0 && target != 1) throw DomainError("unambiguous_pwf_feasible: target must be 0 or 1");
  const QuditDims dims = inst.dims();
  const DensityOperator wanted = target == 0 ? inst.state0() : inst.state1();
  const DensityOperator other = target == 0 ? inst.state1() : inst.state0();
  const Subspace kernel = Subspace::support(other.op(), dims).complement();

  UnambiguousResult out;
  if (kernel.size() == 0) {
    out.method = "other state has full support";
    return out;
  }
  const ComplexMatrix b = kernel.basis_matrix();
  const auto k = static_cast<Eigen::Index>(kernel.size());
  const auto space = PhaseSpace::of(dims);

  sdp::SdpProblem prob;
  const sdp::VarId s = prob.add_variable("sigma", k);
  prob.add_psd("sigma>=0", sdp::MatrixForm(k).add(s));
  prob.add_psd("1-sigma>=0", sdp::MatrixForm(eye(k)).add(s, -1.0));
  for (std::size_t u = 0; u < space->size(); ++u)
    prob.add_linear(point_name("W", u),
                    sdp::LinearForm().add(s, b.adjoint() * space->point_operator(u).matrix() * b),
                    sdp::Relation::geq);
  prob.set_objective(sdp::Sense::maximize,
                     sdp::LinearForm().add(s, b.adjoint() * wanted.matrix() * b));
  const sdp::SdpOutcome r = sdp::solve(prob, settings);
  require_optimal(r.status, r.reason, "unambiguous_pwf_feasible");

  out.value = r.primal_value;
  out.dual_bound = r.dual_value;
  out.identifiable = out.value > kUnambiguousThreshold;
  out.method = "SDP on the kernel of the other state";
  if (out.identifiable)
    out.effect = HermitianOperator(b * r.solutions.at("sigma").matrix() * b.adjoint(), 1e-8);
  return out;
}

double helstrom_error(const DensityOperator& rho0, const DensityOperator& rho1, double p) {
  if (!(rho0.dims() == rho1.dims())) throw DomainError("helstrom_error: dims differ");
  return 0.5 * (1.0 - trace_norm(rho0.op() * p - rho1.op() * (1.0 - p)));
}

Norms distinguishability_norms(const DiscriminationInstance& inst, const sdp::SolveSettings& settings) {
  const double p = inst.prior();
  Norms out;
  out.all = trace_norm(inst.state0().op() * p - inst.state1().op() * (1.0 - p));
  const MinErrorResult r = min_error_pwf(inst, settings);
  require_optimal(r.status, r.reason, "distinguishability_norms");
  out.pwf = std::max(0.0, 1.0 - 2.0 * r.value);
  return out;
}

Norms distinguishability_norms(const DensityOperator& rho, const DensityOperator& sigma, double p) {
  return distinguishability_norms(DiscriminationInstance(rho, sigma, p));
}

double data_hiding_ratio(const DiscriminationInstance& inst, const sdp::SolveSettings& settings) {
  const Norms n = distinguishability_norms(inst, settings);
  if (n.pwf <= 1e-9) throw DomainError("data_hiding_ratio: PWF norm vanishes, ratio undefined");
  return n.all / n.pwf;
}

double data_hiding_ratio(const DensityOperator& rho, const DensityOperator& sigma, double p) {
  return data_hiding_ratio(DiscriminationInstance(rho, sigma, p));
}

RobustnessResult pwf_robustness_of_optimal_measurement(const DensityOperator& rho,
                                                       const DensityOperator& sigma,
                                                       const sdp::SolveSettings& settings) {
  if (!(rho.dims() == sigma.dims())) throw DomainError("pwf_robustness: dims differ");
  const QuditDims& dims = rho.dims();
  const Eigen::Index n = dims.total_dim();
  const ComplexMatrix delta = rho.matrix() - sigma.matrix();
  if (max_abs(delta) <= 1e-12) throw DomainError("pwf_robustness: states coincide");

  // Helstrom-optimal E0 is the identity on the positive eigenspace of rho - sigma, zero on the
  // negative one and free (between 0 and 1) on the kernel.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((delta + delta.adjoint()) / 2.0);
  const double tol = 1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  ComplexMatrix positive = ComplexMatrix::Zero(n, n);
  std::vector<Eigen::Index> kernel_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = es.eigenvalues()(i);
    const ComplexVector v = es.eigenvectors().col(i);
    if (l > tol) positive += v * v.adjoint();
    else if (l >= -tol) kernel_cols.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(kernel_cols.size());
  ComplexMatrix b0(n, k);
  for (Eigen::Index j = 0; j < k; ++j) b0.col(j) = es.eigenvectors().col(kernel_cols[static_cast<std::size_t>(j)]);

  const auto space = PhaseSpace::of(dims);
  sdp::SdpProblem prob;
  const sdp::VarId r = prob.add_scalar("r");
  const sdp::VarId noise = prob.add_variable("N0", n);
  prob.add_psd("N0>=0", sdp::MatrixForm(n).add(noise));
  prob.add_psd("r-N0>=0", sdp::MatrixForm(n).add_scaled(r, eye(n)).add(noise, -1.0));
  sdp::VarId free = -1;
  if (k > 0) {
    free = prob.add_variable("sigma", k);
    prob.add_psd("sigma>=0", sdp::MatrixForm(k).add(free));
    prob.add_psd("1-sigma>=0", sdp::MatrixForm(eye(k)).add(free, -1.0));
  }
  for (std::size_t u = 0; u < space->size(); ++u) {
    const ComplexMatrix& a = space->point_operator(u).matrix();
    const double fixed = space->trace_with(u, positive);
    sdp::LinearForm lo(fixed), hi(1.0 - fixed);
    lo.add(noise, a);
    hi.add(noise, -a).add_scalar(r);
    if (k > 0) {
      const ComplexMatrix c = b0.adjoint() * a * b0;
      lo.add(free, c);
      hi.add(free, -c);
    }
    prob.add_linear(point_name("W0", u), std::move(lo), sdp::Relation::geq);
    prob.add_linear(point_name("W1", u), std::move(hi), sdp::Relation::geq);
  }
  prob.set_objective(sdp::Sense::minimize, sdp::LinearForm().add_scalar(r));

  const sdp::SdpOutcome out = sdp::solve(prob, settings);
  require_optimal(out.status, out.reason, "pwf_robustness_of_optimal_measurement");
  ComplexMatrix e0 = positive;
  if (k > 0) e0 += b0 * out.solutions.at("sigma").matrix() * b0.adjoint();
  return {out.primal_value, HermitianOperator(e0, 1e-8), out.solutions.at("N0")};
}

MinErrorResult magic_assisted_min_error(const DiscriminationInstance& inst, const DensityOperator& tau,
                                        int k, const sdp::SolveSettings& settings) {
  if (!(tau.dims() == QuditDims({3}))) throw DomainError("magic_assisted_min_error: ancilla must be a qutrit");
  if (k < 0 || k > 2) throw DomainError("magic_assisted_min_error: k must be 0, 1 or 2");
  DensityOperator r0 = inst.state0(), r1 = inst.state1();
  if (r0.dim() * static_cast<Eigen::Index>(std::pow(3, k)) > kCopyGuard)
    throw DomainError("magic_assisted_min_error: total dimension exceeds guard");
  for (int i = 0; i < k; ++i) {
    r0 = tensor(r0, tau);
    r1 = tensor(r1, tau);
  }
  return min_error_pwf(DiscriminationInstance(r0, r1, inst.prior()), settings);
}

std::vector<ExperimentRow> robustness_experiment(int pairs, std::uint64_t seed, unsigned threads) {
  if (pairs < 1) throw DomainError("robustness_experiment: pairs must be positive");
  std::vector<ExperimentRow> rows(static_cast<std::size_t>(pairs));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(pairs));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      ExperimentRow& row = rows[i];
      row.seed = seed + i;
      try {
        const DensityOperator rho(random_pure_state(3, row.seed));
        const DensityOperator sigma = orthogonal_complement(rho);
        row.sum_negativity = negativity_report(rho).sum_negativity;
        row.robustness = pwf_robustness_of_optimal_measurement(rho, sigma).value;
        row.ratio = data_hiding_ratio(rho, sigma, 0.5);
        row.status = "ok";
      } catch (const SolverError& e) {
        row.status = std::string("solver_") + sdp::to_string(e.status());
      } catch (const std::exception&) {
        row.status = "error";
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("pearson_correlation: need two equal series");
  const auto n = static_cast<Eigen::Index>(x.size());
  const RealVector a = Eigen::Map<const RealVector>(x.data(), n);
  const RealVector b = Eigen::Map<const RealVector>(y.data(), n);
  const RealVector ca = a.array() - a.mean();
  const RealVector cb = b.array() - b.mean();
  const double den = ca.norm() * cb.norm();
  if (den == 0.0) throw DomainError("pearson_correlation: constant series");
  return ca.dot(cb) / den;
}

}  // namespace pwf
