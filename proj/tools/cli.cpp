#include "cli.hpp"

#include "pwf/discrimination.hpp"
#include "pwf/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace pwf::cli {

namespace {

using io::format_number;
using io::Json;

struct Options {
  // shared
  std::string format;
  std::string out_path;
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 150;
  std::optional<std::uint64_t> seed;
  // algebra
  std::vector<int> dims;
  // wigner
  std::string state_path, named;
  int copies = 1;
  std::string role = "state";
  bool log2 = false;
  // discriminate
  std::string rho0_path, rho1_path, pair;
  double prior = 0.5;
  std::string mode = "min-error";
  int target = 0;
  // certify
  std::string subspace_path, example;
  int a0_dim = 0, a0_sign = 1;
  bool strong = false;
  // reproduce
  std::string claim;
  // experiment
  int pairs = 100;
  unsigned threads = 0;
};

sdp::SolveSettings settings_of(const Options& o) {
  sdp::SolveSettings s;
  s.gap_tol = o.gap_tol;
  s.feas_tol = o.feas_tol;
  s.max_iter = o.max_iter;
  return s;
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--gap-tol", o.gap_tol, "relative duality gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--feas-tol", o.feas_tol, "relative feasibility tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "interior-point iteration limit")->check(CLI::PositiveNumber);
}

DensityOperator load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return io::read_state(in);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

DensityOperator named_state(const std::string& name) {
  if (name == "strange") return DensityOperator(strange_state());
  if (name == "norell") return DensityOperator(norell_state());
  if (name == "k") return DensityOperator(k_state());
  if (name == "zero") return DensityOperator(basis_state(0, 3));
  throw DomainError("unknown named state '" + name + "'");
}

// Writes to --out when given, otherwise to out.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path);
  if (!f) throw DomainError("cannot write '" + o.out_path + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

int cmd_algebra(const Options& o, std::ostream& out) {
  const QuditDims dims(o.dims);
  const AlgebraReport r = verify_phase_point_algebra(dims, o.seed.value_or(7));
  if (o.format == "json") {
    Json j;
    j["schema"] = io::kSchemaVersion;
    j["dims"] = dims.dims();
    for (const auto& c : r.checks)
      j["checks"].push_back({{"name", c.name}, {"residual", io::rounded(c.residual)}, {"pass", c.passed}});
    for (const auto& s : r.spectra)
      j["spectra"].push_back({{"d", s.d},
                              {"plus", s.plus_multiplicity},
                              {"minus", s.minus_multiplicity},
                              {"eigenvalue_deviation", io::rounded(s.max_eigenvalue_deviation)},
                              {"spread", io::rounded(s.max_spectrum_spread)},
                              {"pass", s.passed}});
    j["pass"] = r.all_passed();
    emit(o, out, dump(j));
  } else {
    std::ostringstream t;
    t << pad("property", 28) << pad("residual", 20) << "result\n";
    int passed = 0;
    for (const auto& c : r.checks) {
      t << pad(c.name, 28) << pad(format_number(c.residual), 20) << (c.passed ? "pass" : "FAIL") << "\n";
      passed += c.passed ? 1 : 0;
    }
    t << passed << "/" << r.checks.size() << " pass\n";
    for (const auto& s : r.spectra)
      t << "spectrum d=" << s.d << ": +1 x" << s.plus_multiplicity << ", -1 x" << s.minus_multiplicity
        << " (deviation " << format_number(std::max(s.max_eigenvalue_deviation, s.max_spectrum_spread)) << ") "
        << (s.passed ? "pass" : "FAIL") << "\n";
    emit(o, out, t.str());
  }
  return r.all_passed() ? kPass : kCheckFailed;
}

int cmd_wigner(const Options& o, std::ostream& out) {
  if (o.state_path.empty() == o.named.empty()) throw DomainError("give exactly one of --state and --named");
  DensityOperator rho = o.state_path.empty() ? named_state(o.named) : load_state(o.state_path);
  if (o.copies > 1) rho = tensor_power(rho, o.copies);
  const WignerRole role = o.role == "effect" ? WignerRole::effect : WignerRole::state;
  const WignerRepresentation w = wigner_of(rho.op(), rho.dims(), role);
  if (o.format == "csv" || o.format.empty()) {
    std::ostringstream t;
    write_wigner_csv(t, w);
    emit(o, out, t.str());
    return kPass;
  }
  const NegativityReport n = negativity_report(rho, o.log2 ? LogBase::two : LogBase::natural);
  if (o.format == "json") {
    Json j;
    j["schema"] = io::kSchemaVersion;
    j["dims"] = rho.dims().dims();
    j["role"] = o.role;
    j["values"] = Json::array();
    for (Eigen::Index u = 0; u < w.values.size(); ++u) j["values"].push_back(io::rounded(w.values(u)));
    j["sum_negativity"] = io::rounded(n.sum_negativity);
    j["max_negativity"] = io::rounded(n.max_negativity);
    j["mana"] = io::rounded(n.mana);
    j["mana_base"] = o.log2 ? "2" : "e";
    j["pwf"] = is_pwf(w);
    emit(o, out, dump(j));
  } else {
    std::ostringstream t;
    t << "min value       " << format_number(w.min_value()) << "\n"
      << "sum negativity  " << format_number(n.sum_negativity) << "\n"
      << "max negativity  " << format_number(n.max_negativity) << "\n"
      << "mana (" << (o.log2 ? "log2" : "ln") << ")      " << format_number(n.mana) << "\n"
      << "PWF             " << (is_pwf(w) ? "yes" : "no") << "\n";
    emit(o, out, t.str());
  }
  return kPass;
}

DiscriminationInstance instance_of(const Options& o) {
  if (!o.pair.empty()) {
    if (!o.rho0_path.empty() || !o.rho1_path.empty()) throw DomainError("--pair excludes --rho0/--rho1");
    if (o.pair != "strange") throw DomainError("unknown pair '" + o.pair + "'");
    return strange_pair(o.copies, o.prior);
  }
  if (o.rho0_path.empty() || o.rho1_path.empty()) throw DomainError("give --pair or both --rho0 and --rho1");
  return {load_state(o.rho0_path), load_state(o.rho1_path), o.prior, o.copies};
}

int cmd_discriminate(const Options& o, std::ostream& out) {
  const DiscriminationInstance inst = instance_of(o);
  const sdp::SolveSettings s = settings_of(o);
  Json j;
  if (o.mode == "min-error") {
    const MinErrorResult r = min_error_pwf(inst, s);
    j = io::min_error_to_json(inst, r);
    j["settings"] = io::settings_to_json(s);
    emit(o, out, dump(j));
    return r.ok() ? kPass : kSolverFailed;
  }
  if (o.mode == "dual") {
    const DualResult r = min_error_dual_pwf(inst, s);
    j["schema"] = io::kSchemaVersion;
    j["problem"] = "min_error_pwf_dual";
    j["instance"] = io::instance_to_json(inst);
    j["status"] = sdp::to_string(r.status);
    j["dual"] = io::rounded(r.value);
    j["certificate"] = io::dual_certificate_to_json(r.certificate);
    j["settings"] = io::settings_to_json(s);
    emit(o, out, dump(j));
    return r.ok() ? kPass : kSolverFailed;
  }
  if (o.mode == "unambiguous") {
    const UnambiguousResult r = unambiguous_pwf_feasible(inst, o.target, s);
    j = io::unambiguous_to_json(inst, o.target, r);
    j["settings"] = io::settings_to_json(s);
    emit(o, out, dump(j));
    return kPass;
  }
  // helstrom / ratio on the n-copy states
  const DensityOperator a = inst.state0(), b = inst.state1();
  j["schema"] = io::kSchemaVersion;
  j["instance"] = io::instance_to_json(inst);
  if (o.mode == "helstrom") {
    j["problem"] = "helstrom";
    j["primal"] = io::rounded(helstrom_error(a, b, inst.prior()));
  } else if (o.mode == "ratio") {
    const Norms n = distinguishability_norms(inst, s);
    j["problem"] = "data_hiding_ratio";
    j["norm_all"] = io::rounded(n.all);
    j["norm_pwf"] = io::rounded(n.pwf);
    j["ratio"] = io::rounded(data_hiding_ratio(inst, s));
  } else if (o.mode == "robustness") {
    const RobustnessResult r = pwf_robustness_of_optimal_measurement(a, b, s);
    j["problem"] = "robustness";
    j["primal"] = io::rounded(r.value);
    j["povm"] = {{"E0", io::matrix_to_json(r.E0.matrix())}, {"N0", io::matrix_to_json(r.N0.matrix())}};
  }
  emit(o, out, dump(j));
  return kPass;
}

Subspace subspace_of(const Options& o) {
  const int given = (o.subspace_path.empty() ? 0 : 1) + (o.a0_dim ? 1 : 0) + (o.example.empty() ? 0 : 1);
  if (given != 1) throw DomainError("give exactly one of --subspace, --a0 and --example");
  if (!o.subspace_path.empty()) return io::subspace_from_json(load_json(o.subspace_path));
  if (o.a0_dim) {
    if (o.a0_sign != 1 && o.a0_sign != -1) throw DomainError("--sign must be 1 or -1");
    return a0_eigenspace_basis(o.a0_dim, o.a0_sign);
  }
  const ExamplePair pair = example_d5_pair();
  if (o.example == "rho0") return Subspace::support(pair.rho0.op(), pair.rho0.dims());
  if (o.example == "rho1") return Subspace::support(pair.rho1.op(), pair.rho1.dims());
  throw DomainError("--example must be rho0 or rho1");
}

int cmd_certify(const Options& o, std::ostream& out) {
  const Subspace s = subspace_of(o);
  const sdp::SolveSettings settings = settings_of(o);
  ExtendibilityCertificate c = is_pwf_unextendible(s, settings);
  if (o.strong && c.verdict == Verdict::unextendible) c = certify_strong_unextendibility(s, settings);
  emit(o, out, dump(io::certificate_to_json(c)));
  if (o.strong) return c.strong.value_or(false) ? kPass : kCheckFailed;
  return kPass;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
  const std::vector<ClaimRow> rows = reproduce(o.claim);
  bool all = true;
  for (const auto& r : rows) all = all && r.pass;
  if (o.format == "json") {
    Json j;
    j["schema"] = io::kSchemaVersion;
    j["claim"] = o.claim;
    for (const auto& r : rows)
      j["rows"].push_back({{"claim", r.claim},
                           {"quantity", r.quantity},
                           {"expected", r.expected},
                           {"computed", io::rounded(r.computed)},
                           {"delta", std::isnan(r.delta) ? Json() : Json(io::rounded(r.delta))},
                           {"pass", r.pass}});
    j["pass"] = all;
    emit(o, out, dump(j));
  } else {
    std::ostringstream t;
    t << pad("claim", 10) << pad("quantity", 40) << pad("reference", 20) << pad("computed", 20)
      << pad("|delta|", 20) << "result\n";
    for (const auto& r : rows)
      t << pad(r.claim, 10) << pad(r.quantity, 40) << pad(r.expected, 20) << pad(format_number(r.computed), 20)
        << pad(std::isnan(r.delta) ? "-" : format_number(r.delta), 20) << (r.pass ? "pass" : "FAIL") << "\n";
    emit(o, out, t.str());
  }
  return all ? kPass : kCheckFailed;
}

int cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<ExperimentRow> rows = robustness_experiment(o.pairs, *o.seed, o.threads);
  std::ostringstream csv;
  io::write_experiment_csv(csv, rows);
  emit(o, out, csv.str());

  std::vector<double> r, q;
  int failed = 0;
  for (const auto& row : rows) {
    if (row.status != "ok") {
      ++failed;
      continue;
    }
    r.push_back(row.robustness);
    q.push_back(row.ratio);
  }
  err << rows.size() << " pairs, " << failed << " failed";
  if (r.size() >= 2) err << ", Pearson(robustness, ratio) = " << format_number(pearson_correlation(r, q));
  err << "\n";
  return failed == 0 ? kPass : kSolverFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Phase-space tools for qudit state discrimination with positive-Wigner measurements"};
  app.require_subcommand(1);

  auto* algebra = app.add_subcommand("algebra", "verify the phase-point operator algebra");
  algebra->add_option("--dims", o.dims, "local dimensions, e.g. 3 or 3,3")->required()->delimiter(',');
  algebra->add_option("--seed", o.seed, "seed of the random reconstruction test");
  algebra->add_option("--format", o.format)->check(CLI::IsMember({"table", "json"}));

  auto* wigner = app.add_subcommand("wigner", "discrete Wigner function of a state");
  wigner->add_option("--state", o.state_path, "state JSON file");
  wigner->add_option("--named", o.named)->check(CLI::IsMember({"strange", "norell", "k", "zero"}));
  wigner->add_option("--copies", o.copies)->check(CLI::Range(1, 5));
  wigner->add_option("--role", o.role)->check(CLI::IsMember({"state", "effect"}));
  wigner->add_flag("--log2", o.log2, "mana in bits");
  wigner->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json", "table"}));
  wigner->add_option("--out", o.out_path);

  auto* disc = app.add_subcommand("discriminate", "two-state discrimination with PWF measurements");
  disc->add_option("--rho0", o.rho0_path, "state JSON file");
  disc->add_option("--rho1", o.rho1_path, "state JSON file");
  disc->add_option("--pair", o.pair, "built-in pair")->check(CLI::IsMember({"strange"}));
  disc->add_option("--prior", o.prior)->check(CLI::Range(0.0, 1.0));
  disc->add_option("--copies", o.copies)->check(CLI::Range(1, 5));
  disc->add_option("--mode", o.mode)
      ->check(CLI::IsMember({"min-error", "dual", "unambiguous", "helstrom", "ratio", "robustness"}));
  disc->add_option("--target", o.target)->check(CLI::IsMember({0, 1}));
  disc->add_option("--out", o.out_path);
  add_solver_flags(disc, o);

  auto* cert = app.add_subcommand("certify", "PWF extendibility of a subspace");
  cert->add_option("--subspace", o.subspace_path, "subspace JSON file {dims, basis}");
  cert->add_option("--a0", o.a0_dim, "eigenspace of A_0 in dimension d");
  cert->add_option("--sign", o.a0_sign, "eigenvalue +1 or -1");
  cert->add_option("--example", o.example, "support of rho0 or rho1 of the five-dimensional pair");
  cert->add_flag("--strong", o.strong, "also search for a full-support PWF state");
  cert->add_option("--out", o.out_path);
  add_solver_flags(cert, o);

  auto* repro = app.add_subcommand("reproduce", "recompute reference values");
  repro->add_option("--claim", o.claim)->required()->check(
      CLI::IsMember({"prop3", "example5", "thm4", "prop4", "dhr", "all"}));
  repro->add_option("--format", o.format)->check(CLI::IsMember({"table", "json"}));
  repro->add_option("--out", o.out_path);

  auto* exp = app.add_subcommand("experiment", "robustness vs data-hiding ratio on random pure qutrit pairs");
  exp->add_option("--pairs", o.pairs, "number of pairs")->check(CLI::PositiveNumber);
  exp->add_option("--seed", o.seed, "base seed; row i uses seed + i")->required();
  exp->add_option("--out", o.out_path, "CSV file");
  exp->add_option("--threads", o.threads, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*algebra) return cmd_algebra(o, out);
    if (*wigner) return cmd_wigner(o, out);
    if (*disc) return cmd_discriminate(o, out);
    if (*cert) return cmd_certify(o, out);
    if (*repro) return cmd_reproduce(o, out);
    if (*exp) return cmd_experiment(o, out, err);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kSolverFailed;
  }
  return kUsage;
}

}  // namespace pwf::cli
