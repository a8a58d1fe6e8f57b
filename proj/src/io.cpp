#include "pwf/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace pwf::io {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

double rounded(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v));
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({rounded(m(i, j).real()), rounded(m(i, j).imag())});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Complex entry(const Json& pair) {
  if (!pair.is_array() || pair.size() != 2) throw DomainError("matrix entry must be [re, im]");
  return {pair[0].get<double>(), pair[1].get<double>()};
}

}  // namespace

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("matrix must be a non-empty array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw DomainError("matrix rows have unequal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = entry(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json state_to_json(const DensityOperator& rho) {
  Json flat = Json::array();
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back({rounded(m(i, j).real()), rounded(m(i, j).imag())});
  return {{"dims", rho.dims().dims()}, {"matrix", std::move(flat)}};
}

DensityOperator state_from_json(const Json& j) {
  try {
    const QuditDims dims(j.at("dims").get<std::vector<int>>());
    const Eigen::Index n = dims.total_dim();
    const Json& mj = j.at("matrix");
    ComplexMatrix m(n, n);
    if (mj.size() == static_cast<std::size_t>(n * n) && mj[0].size() == 2 && mj[0][0].is_number()) {
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < n; ++c) m(i, c) = entry(mj[static_cast<std::size_t>(i * n + c)]);
    } else {
      m = matrix_from_json(mj);
      if (m.rows() != n || m.cols() != n) throw DomainError("state matrix does not match dims");
    }
    // Serialized states carry 12 significant digits.
    return {HermitianOperator(m, 1e-9), dims, 1e-9};
  } catch (const Json::exception& e) {
    throw DomainError(std::string("state JSON: ") + e.what());
  }
}

DensityOperator read_state(std::istream& is) {
  Json j;
  try {
    is >> j;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("state JSON: ") + e.what());
  }
  return state_from_json(j);
}

void write_state(std::ostream& os, const DensityOperator& rho) { os << state_to_json(rho).dump(2) << "\n"; }

Subspace subspace_from_json(const Json& j) {
  try {
    const QuditDims dims(j.at("dims").get<std::vector<int>>());
    std::vector<ComplexVector> basis;
    for (const Json& v : j.at("basis")) {
      ComplexVector x(static_cast<Eigen::Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = entry(v[i]);
      basis.push_back(std::move(x));
    }
    return {std::move(basis), dims, 1e-9};
  } catch (const Json::exception& e) {
    throw DomainError(std::string("subspace JSON: ") + e.what());
  }
}

Json settings_to_json(const sdp::SolveSettings& s) {
  return {{"gap_tol", s.gap_tol},
          {"feas_tol", s.feas_tol},
          {"max_iter", s.max_iter},
          {"complex_handling", s.embed ? "real embedding" : "native complex"}};
}

Json certificate_to_json(const ExtendibilityCertificate& c) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["verdict"] = to_string(c.verdict);
  j["margin"] = rounded(c.margin);
  j["method"] = c.method;
  j["witness"] = c.witness ? matrix_to_json(c.witness->matrix()) : Json();
  if (c.strong) {
    j["strong"] = *c.strong;
  } else {
    j["strong"] = nullptr;
  }
  j["strong_margin"] = rounded(c.strong_margin);
  j["strong_witness"] = c.strong_witness ? matrix_to_json(c.strong_witness->matrix()) : Json();
  j["settings"] = settings_to_json(c.settings);
  return j;
}

namespace {

Json vector_json(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(rounded(v(i)));
  return a;
}

}  // namespace

Json dual_certificate_to_json(const DualCertificate& c) {
  return {{"value", rounded(c.value)},
          {"V", matrix_to_json(c.V.matrix())},
          {"U", matrix_to_json(c.U.matrix())},
          {"a", vector_json(c.a)},
          {"b", vector_json(c.b)},
          {"slack_min_eigenvalue", rounded(c.slack_min_eigenvalue)},
          {"min_multiplier", rounded(c.min_multiplier)},
          {"feasible", c.feasible()}};
}

Json instance_to_json(const DiscriminationInstance& inst) {
  return {{"rho0", state_to_json(inst.rho0())},
          {"rho1", state_to_json(inst.rho1())},
          {"prior", rounded(inst.prior())},
          {"copies", inst.copies()}};
}

Json min_error_to_json(const DiscriminationInstance& inst, const MinErrorResult& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["problem"] = "min_error_pwf";
  j["instance"] = instance_to_json(inst);
  j["status"] = sdp::to_string(r.status);
  j["primal"] = rounded(r.value);
  j["dual"] = rounded(r.dual_bound);
  j["gap"] = rounded(r.gap);
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["povm"] = {{"E0", matrix_to_json(r.povm.E0.matrix())},
               {"E1", matrix_to_json(r.povm.E1.matrix())},
               {"min_wigner", rounded(r.povm.min_wigner)},
               {"pwf", r.povm.pwf}};
  j["certificate"] = dual_certificate_to_json(r.certificate);
  return j;
}

Json unambiguous_to_json(const DiscriminationInstance& inst, int target, const UnambiguousResult& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["problem"] = "unambiguous_pwf";
  j["instance"] = instance_to_json(inst);
  j["target"] = target;
  j["primal"] = rounded(r.value);
  j["dual"] = rounded(r.dual_bound);
  j["gap"] = rounded(std::abs(r.value - r.dual_bound));
  j["identifiable"] = r.identifiable;
  j["method"] = r.method;
  j["effect"] = r.effect ? matrix_to_json(r.effect->matrix()) : Json();
  return j;
}

void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "seed,sn,robustness,dh_ratio,status\n";
  for (const auto& r : rows)
    os << r.seed << "," << format_number(r.sum_negativity) << "," << format_number(r.robustness) << ","
       << format_number(r.ratio) << "," << r.status << "\n";
}

}  // namespace pwf::io
