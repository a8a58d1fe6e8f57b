// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "pwf/discrimination.hpp"
#include "pwf/io.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace pwf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed condition; the first few are kept in the detail line.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || detail.str().size() < 300) detail << " [" << what << "]";
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) { return io::format_number(v); }

DensityOperator pure(const PureState& s) { return DensityOperator(s); }

double weight_outside(const ComplexMatrix& rho, const Subspace& s) {
  const ComplexMatrix q = oracle::eye(rho.rows()) - s.projector().matrix();
  return (q * rho * q).trace().real();
}

void phase_space_algebra(Outcome& o) {
  double worst = 0.0;
  for (int d : {3, 5, 7}) {
    const AlgebraReport r = verify_phase_point_algebra(QuditDims({d}));
    o.require(r.checks.size() == 6, "six checks d=" + std::to_string(d));
    for (const auto& c : r.checks) {
      worst = std::max(worst, c.residual);
      o.require(c.residual <= 1e-10, c.name + " d=" + std::to_string(d));
    }
    const SpectrumCheck s = point_operator_spectrum(d);
    o.require(s.plus_multiplicity == (d + 1) / 2 && s.minus_multiplicity == (d - 1) / 2,
              "spectrum d=" + std::to_string(d));
    o.require(s.max_eigenvalue_deviation <= 1e-10 && s.max_spectrum_spread <= 1e-10, "eigenvalues +-1");
  }
  o.detail << "max residual " << num(worst);
}

void stabilizer_positivity(Outcome& o) {
  const auto states = enumerate_stabilizer_states(3);
  o.require(states.size() == 12, "12 states");
  for (const auto& s : states) {
    const RealVector w = oracle::wigner_direct(pure(s).matrix(), {3});
    for (Eigen::Index u = 0; u < w.size(); ++u)
      o.require(std::abs(w(u)) <= 1e-10 || std::abs(w(u) - 1.0 / 3.0) <= 1e-10, "value in {0,1/3}");
    o.require(is_pwf(wigner_of(pure(s))), "library PWF");
  }
  const double strange = wigner_of(pure(strange_state())).min_value();
  const double norell = wigner_of(pure(norell_state())).min_value();
  o.require(std::abs(strange + 1.0 / 3.0) <= 1e-10, "Strange min -1/3");
  o.require(norell < 0.0, "Norell negative");
  o.detail << "Strange min " << num(strange) << ", Norell min " << num(norell);
}

// Error of the analytic POVM and value of the analytic dual point, both recomputed from matrices.
void strange_pair_minimum_error(Outcome& o) {
  for (int n : {1, 2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double expected = 1.0 / std::pow(2.0, n + 1);
    const std::string tag = " n=" + std::to_string(n);
    const DiscriminationInstance inst = strange_pair(n);
    const MinErrorResult r = min_error_pwf(inst);
    const double secs = seconds_since(t0);
    o.require(r.ok(), "solver status" + tag);
    o.require(std::abs(r.value - expected) <= (n < 3 ? 1e-6 : 1e-5), "SDP value" + tag);
    o.require(r.gap <= 1e-6, "gap" + tag);
    o.require(n < 3 || secs <= 600.0, "runtime n=3");

    const AnalyticSolution a = strange_pair_analytic(n);
    const ComplexMatrix r0 = inst.state0().matrix(), r1 = inst.state1().matrix();
    const ComplexMatrix e0 = a.povm.E0.matrix();
    const Eigen::Index dim = e0.rows();
    const double primal = 0.5 * ((oracle::eye(dim) - e0) * r0).trace().real() + 0.5 * (e0 * r1).trace().real();
    const std::vector<int> dims(static_cast<std::size_t>(n), 3);
    o.require(oracle::wigner_direct(e0, dims, false).minCoeff() >= -1e-12, "E0 PWF" + tag);
    o.require(oracle::wigner_direct(oracle::eye(dim) - e0, dims, false).minCoeff() >= -1e-12, "E1 PWF" + tag);

    const DualCertificate& c = a.certificate;
    const auto ops = oracle::point_operators(dims);
    ComplexMatrix slack = c.V.matrix() - c.U.matrix() + 0.5 * r1 - 0.5 * r0;
    for (std::size_t u = 0; u < ops.size(); ++u)
      slack -= (c.a(static_cast<Eigen::Index>(u)) - c.b(static_cast<Eigen::Index>(u))) * ops[u];
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(slack), ev(c.V.matrix()), eu(c.U.matrix());
    const double dual = 0.5 - c.V.trace() - c.b.sum();
    o.require(es.eigenvalues().minCoeff() >= -1e-9, "dual slack PSD" + tag);
    o.require(ev.eigenvalues().minCoeff() >= -1e-9 && eu.eigenvalues().minCoeff() >= -1e-9, "V, U PSD" + tag);
    o.require(c.a.minCoeff() >= -1e-12 && c.b.minCoeff() >= -1e-12, "a, b >= 0" + tag);
    o.require(std::abs(primal - expected) <= 1e-8, "analytic POVM" + tag);
    o.require(std::abs(dual - expected) <= 1e-8, "analytic dual" + tag);
    o.detail << "n=" << n << ": " << num(r.value) << " (" << num(secs) << " s) ";
  }
}

void unambiguous_identification(Outcome& o) {
  double worst = 0.0;
  auto check = [&](const DiscriminationInstance& inst, int target, const std::string& what) {
    const double v = unambiguous_pwf_feasible(inst, target).value;
    worst = std::max(worst, v);
    o.require(v <= 1e-7, what);
  };
  for (int n : {1, 2}) check(strange_pair(n), 0, "Strange pair n=" + std::to_string(n));

  int magic = 0;
  for (std::uint64_t seed = 5000; magic < 20; ++seed) {
    const DensityOperator rho(random_pure_state(3, seed));
    if (wigner_of(rho).min_value() >= -1e-9) continue;
    ++magic;
    for (int n : {1, 2})
      check(DiscriminationInstance(rho, orthogonal_complement(rho), 0.5, n), 0, "magic seed " + std::to_string(seed));
  }

  // Mixtures lambda sigma + (1 - lambda) 1/3 shrunk until every Wigner value is at least 1e-3.
  std::mt19937_64 rng(6000);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const QuditDims q({3});
  auto positive_state = [&] {
    const DensityOperator sigma = random_density(q, rng);
    for (double lambda = unit(rng);; lambda *= 0.8) {
      const ComplexMatrix m = lambda * sigma.matrix() + (1.0 - lambda) * oracle::eye(3) / 3.0;
      if (oracle::wigner_direct(m, {3}).minCoeff() >= 1e-3) return DensityOperator(HermitianOperator(m), q);
    }
  };
  for (int i = 0; i < 50; ++i) {
    const DiscriminationInstance inst(positive_state(), positive_state());
    o.require(inst.rho0().op().min_eigenvalue() > 0.0 && inst.rho1().op().min_eigenvalue() > 0.0, "full rank");
    for (int target : {0, 1}) check(inst, target, "positive pair " + std::to_string(i));
  }
  o.detail << "max value " << num(worst) << " over " << 2 + 40 + 100 << " checks";
}

void unextendible_subspaces(Outcome& o) {
  for (int d : {3, 5, 7}) {
    const double v = max_min_wigner_over(a0_eigenspace_basis(d, -1)).value;
    o.require(std::abs(v + 1.0 / d) <= 1e-7, "-1 eigenspace d=" + std::to_string(d));
    o.detail << "d=" << d << ": " << num(v) << " ";
  }
  auto strong = [&](const Subspace& s, const std::string& what) {
    const ExtendibilityCertificate c = certify_strong_unextendibility(s);
    o.require(c.verdict == Verdict::unextendible && c.strong.value_or(false), what);
    if (!c.strong_witness) return;
    const ComplexMatrix& w = c.strong_witness->matrix();
    o.require(oracle::wigner_direct(w, s.dims().dims()).minCoeff() >= -1e-6, what + " witness PWF");
    o.require(weight_outside(w, s) <= 1e-9, what + " witness support");
    const ComplexMatrix b = s.basis_matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b.adjoint() * w * b);
    o.require(es.eigenvalues().minCoeff() > 1e-7, what + " witness full rank");
  };
  for (int d : {3, 5, 7}) strong(a0_eigenspace_basis(d, +1), "+1 eigenspace d=" + std::to_string(d));
  const ExamplePair pair = example_d5_pair();
  strong(Subspace::support(pair.rho0.op(), pair.rho0.dims()), "supp(rho0)");
}

void stabilizer_subsets(Outcome& o) {
  int count = 0;
  for (int d : {3, 5}) {
    for (const auto& basis : stabilizer_bases(d)) {
      for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
        std::vector<PureState> chosen;
        ComplexMatrix perp = oracle::eye(d);
        for (int j = 0; j < d; ++j)
          if (mask & (1u << j)) {
            chosen.push_back(basis[static_cast<std::size_t>(j)]);
            perp -= chosen.back().projector().matrix();
          }
        const RealVector we = oracle::wigner_direct(perp, {d}, false);
        for (Eigen::Index u = 0; u < we.size(); ++u)
          o.require(std::abs(we(u)) <= 1e-8 || std::abs(we(u) - 1.0) <= 1e-8, "complement values in {0,1}");
        o.require(is_pwf_unextendible(Subspace::from_states(chosen)).verdict == Verdict::extendible, "verdict");
        ++count;
      }
    }
  }
  o.detail << count << " subsets";
}

void magic_ancillas(Outcome& o) {
  const DensityOperator s = pure(strange_state());
  const MinErrorResult r = magic_assisted_min_error(strange_pair(1), s, 1);
  o.require(r.ok() && r.value > 1e-4, "error with Strange ancilla");
  const double sn2 = negativity_report(tensor_power(s, 2)).sum_negativity;
  o.require(std::abs(sn2 - 8.0 / 9.0) <= 1e-9, "sn(S x S)");
  double worst = 0.0;
  for (std::uint64_t seed = 7000; seed < 7100; ++seed) {
    const DensityOperator rho(random_pure_state(3, seed));
    const double sn = sum_negativity(WignerRepresentation{WignerRole::state, rho.dims(),
                                                          oracle::wigner_direct(rho.matrix(), {3})});
    o.require(sn <= 1.0 / 3.0 + 1e-9, "sn <= 1/3");
    for (int k : {2, 3}) {
      const double snk = negativity_report(tensor_power(rho, k)).sum_negativity;
      const double dev = std::abs((2.0 * snk + 1.0) - std::pow(2.0 * sn + 1.0, k));
      worst = std::max(worst, dev);
      o.require(dev <= 1e-9, "composition k=" + std::to_string(k));
    }
  }
  o.detail << "error " << num(r.value) << ", sn(SxS) " << num(sn2) << ", composition dev " << num(worst);
}

void hiding_ratio(Outcome& o) {
  const double r1 = data_hiding_ratio(strange_pair(1));
  const double r2 = data_hiding_ratio(strange_pair(2));
  const double rs = data_hiding_ratio(pure(basis_state(0, 3)), pure(basis_state(1, 3)));
  o.require(std::abs(r1 - 2.0) <= 1e-6, "n=1");
  o.require(std::abs(r2 - 4.0 / 3.0) <= 1e-6, "n=2");
  o.require(std::abs(rs - 1.0) <= 1e-9, "stabilizer pair");
  o.detail << num(r1) << ", " << num(r2) << ", " << num(rs);
}

void robustness_experiment_run(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = robustness_experiment(100, 20240);
  const double secs = seconds_since(t0);
  std::vector<double> r, q;
  for (const auto& row : rows) {
    o.require(row.status == "ok", "row " + std::to_string(row.seed) + " " + row.status);
    o.require(row.robustness >= -1e-9, "robustness >= 0");
    o.require(row.ratio >= 1.0 - 1e-9, "ratio >= 1");
    r.push_back(row.robustness);
    q.push_back(row.ratio);
  }
  const double corr = pearson_correlation(r, q);
  o.require(rows.size() == 100, "100 rows");
  o.require(corr > 0.0, "positive correlation");
  o.require(secs <= 900.0, "runtime");
  o.detail << "Pearson " << num(corr) << " (" << num(secs) << " s)";
}

void cross_oracle(Outcome& o) {
  std::mt19937_64 rng(8000);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::vector<int> dims = i % 3 == 0 ? std::vector<int>{5} : i % 3 == 1 ? std::vector<int>{3} : std::vector<int>{3, 3};
    const QuditDims q(dims);
    const DensityOperator rho = random_density(q, rng);
    const Eigen::Index n = q.total_dim();
    const ComplexMatrix e = oracle::random_effect(n, rng);
    const RealVector p = outcome_probability(rho, {HermitianOperator(e, 1e-9), HermitianOperator(oracle::eye(n) - e, 1e-9)});
    const double d0 = std::abs(p(0) - (e * rho.matrix()).trace().real());
    const double d1 = std::abs(p(1) - ((oracle::eye(n) - e) * rho.matrix()).trace().real());
    worst = std::max({worst, d0, d1});
  }
  o.require(worst <= 1e-9, "outcome probabilities");
  double helstrom = 0.0;
  for (int i = 0; i < 20; ++i) {
    const QuditDims q(i % 2 ? std::vector<int>{3} : std::vector<int>{5});
    const DensityOperator a = random_density(q, rng), b = random_density(q, rng);
    const double p = 0.25 + 0.025 * i;
    const sdp::SdpOutcome s = oracle::unrestricted_min_error(a.matrix(), b.matrix(), p);
    o.require(s.optimal(), "oracle SDP status");
    helstrom = std::max(helstrom, std::abs(helstrom_error(a, b, p) - s.primal_value));
  }
  o.require(helstrom <= 1e-7, "Helstrom vs SDP");
  o.detail << "probability dev " << num(worst) << ", Helstrom dev " << num(helstrom);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"phase-space algebra and point-operator spectra", phase_space_algebra},
      {"stabilizer states PWF, Strange and Norell negative", stabilizer_positivity},
      {"Strange pair minimum error 1/2^(n+1) with analytic certificates", strange_pair_minimum_error},
      {"unambiguous identification infeasible", unambiguous_identification},
      {"max-min Wigner -1/d and strong unextendibility", unextendible_subspaces},
      {"stabilizer subsets leave PWF complements", stabilizer_subsets},
      {"magic ancillas and negativity composition", magic_ancillas},
      {"data-hiding ratios", hiding_ratio},
      {"robustness experiment", robustness_experiment_run},
      {"cross-oracle probabilities and Helstrom error", cross_oracle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
