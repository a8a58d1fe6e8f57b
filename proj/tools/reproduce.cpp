#include "cli.hpp"

#include "pwf/discrimination.hpp"
#include "pwf/io.hpp"

#include <cmath>
#include <limits>

namespace pwf::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ClaimRow near(const std::string& claim, std::string quantity, double expected, double computed, double tol) {
  const double delta = std::abs(computed - expected);
  return {claim, std::move(quantity), io::format_number(expected), computed, delta, delta <= tol};
}

ClaimRow holds(const std::string& claim, std::string quantity, std::string expected, double computed,
               bool pass) {
  return {claim, std::move(quantity), std::move(expected), computed, kNaN, pass};
}

MinErrorResult solved(MinErrorResult r, const char* what) {
  if (!r.ok()) throw SolverError(std::string(what) + ": " + sdp::to_string(r.status) + " (" + r.reason + ")", r.status);
  return r;
}

std::vector<ClaimRow> strange_pair_error() {
  const std::string c = "prop3";
  std::vector<ClaimRow> rows;
  for (int n = 1; n <= 3; ++n) {
    const double expected = 1.0 / std::pow(2.0, n + 1);
    const std::string tag = " n=" + std::to_string(n);
    const MinErrorResult r = solved(min_error_pwf(strange_pair(n)), "min_error_pwf");
    rows.push_back(near(c, "SDP error" + tag, expected, r.value, n < 3 ? 1e-6 : 1e-5));
    rows.push_back(holds(c, "primal-dual gap" + tag, "<= 1e-06", r.gap, r.gap <= 1e-6));
    const AnalyticSolution a = strange_pair_analytic(n);
    rows.push_back(near(c, "analytic POVM error" + tag, expected, a.primal_value, 1e-8));
    rows.push_back(near(c, "analytic dual value" + tag, expected, a.certificate.value, 1e-8));
    rows.push_back(holds(c, "analytic dual feasible" + tag, "1", a.certificate.feasible(1e-9) ? 1.0 : 0.0,
                         a.certificate.feasible(1e-9)));
  }
  return rows;
}

std::vector<ClaimRow> unextendible_examples() {
  const std::string c = "example5";
  std::vector<ClaimRow> rows;
  for (int d : {3, 5, 7}) {
    const MaxMinWigner mm = max_min_wigner_over(a0_eigenspace_basis(d, -1));
    rows.push_back(near(c, "max-min Wigner, A0 -1 eigenspace d=" + std::to_string(d), -1.0 / d, mm.value, 1e-7));
    const ExtendibilityCertificate s = certify_strong_unextendibility(a0_eigenspace_basis(d, +1));
    const bool strong = s.strong.value_or(false);
    rows.push_back(holds(c, "strong, A0 +1 eigenspace d=" + std::to_string(d), "true", s.strong_margin, strong));
  }
  const ExamplePair pair = example_d5_pair();
  const MaxMinWigner s1 = max_min_wigner_over(Subspace::support(pair.rho1.op(), pair.rho1.dims()));
  rows.push_back(near(c, "max-min Wigner over supp(rho1)", -0.2, s1.value, 1e-7));
  const ExtendibilityCertificate s0 =
      certify_strong_unextendibility(Subspace::support(pair.rho0.op(), pair.rho0.dims()));
  rows.push_back(holds(c, "supp(rho0) unextendible", "true", s0.margin, s0.verdict == Verdict::unextendible));
  rows.push_back(holds(c, "supp(rho0) strong", "true", s0.strong_margin, s0.strong.value_or(false)));
  return rows;
}

std::vector<ClaimRow> stabilizer_subsets() {
  const std::string c = "thm4";
  std::vector<ClaimRow> rows;
  for (int d : {3, 5}) {
    int total = 0, binary = 0, extendible = 0;
    for (const auto& basis : stabilizer_bases(d)) {
      for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
        std::vector<PureState> chosen;
        for (int j = 0; j < d; ++j)
          if (mask & (1u << j)) chosen.push_back(basis[static_cast<std::size_t>(j)]);
        ++total;
        try {
          stabilizer_basis_extendibility(chosen);
          ++binary;
        } catch (const NumericalError&) {
        }
        if (is_pwf_unextendible(Subspace::from_states(chosen)).verdict == Verdict::extendible) ++extendible;
      }
    }
    const std::string tag = " d=" + std::to_string(d);
    rows.push_back(near(c, "complement Wigner in {0,1}" + tag, total, binary, 0.0));
    rows.push_back(near(c, "extendible subsets" + tag, total, extendible, 0.0));
  }
  return rows;
}

std::vector<ClaimRow> magic_ancilla() {
  const std::string c = "prop4";
  std::vector<ClaimRow> rows;
  const DiscriminationInstance inst = strange_pair(1);
  const DensityOperator s(strange_state());
  for (int k = 1; k <= 2; ++k) {
    const MinErrorResult r = solved(magic_assisted_min_error(inst, s, k), "magic_assisted_min_error");
    rows.push_back(holds(c, "error with " + std::to_string(k) + " Strange ancilla", "> 0.0001", r.value,
                         r.value > 1e-4));
  }
  rows.push_back(near(c, "sn(S)", 1.0 / 3.0, negativity_report(s).sum_negativity, 1e-9));
  rows.push_back(near(c, "sn(S x S)", 8.0 / 9.0, negativity_report(tensor_power(s, 2)).sum_negativity, 1e-9));
  return rows;
}

std::vector<ClaimRow> hiding_ratio() {
  const std::string c = "dhr";
  std::vector<ClaimRow> rows;
  rows.push_back(near(c, "ratio n=1", 2.0, data_hiding_ratio(strange_pair(1)), 1e-6));
  rows.push_back(near(c, "ratio n=2", 4.0 / 3.0, data_hiding_ratio(strange_pair(2)), 1e-6));
  const DensityOperator zero(basis_state(0, 3)), one(basis_state(1, 3));
  rows.push_back(near(c, "ratio |0>,|1>", 1.0, data_hiding_ratio(zero, one), 1e-9));
  return rows;
}

}  // namespace

std::vector<ClaimRow> reproduce(const std::string& name) {
  if (name == "all") {
    std::vector<ClaimRow> rows;
    for (const auto& c : kClaims) {
      auto part = reproduce(c);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
  }
  if (name == "prop3") return strange_pair_error();
  if (name == "example5") return unextendible_examples();
  if (name == "thm4") return stabilizer_subsets();
  if (name == "prop4") return magic_ancilla();
  if (name == "dhr") return hiding_ratio();
  throw DomainError("unknown claim '" + name + "'");
}

}  // namespace pwf::cli
