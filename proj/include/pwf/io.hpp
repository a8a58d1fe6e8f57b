#pragma once

#include "pwf/discrimination.hpp"

#include <json.hpp>

#include <iosfwd>
#include <vector>

namespace pwf::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kSignificantDigits = 12;

/// Value rounded to 12 significant digits so that JSON output carries no more.
double rounded(double v);
std::string format_number(double v);

/// Nested rows of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"dims": [...], "matrix": [[re, im], ...]} with the matrix flattened row-major.
/// Reading also accepts the matrix as nested rows.
Json state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const Json& j);
DensityOperator read_state(std::istream& is);
void write_state(std::ostream& os, const DensityOperator& rho);

/// {"dims": [...], "basis": [[[re, im], ...], ...]}; vectors are orthonormalized by the caller.
Subspace subspace_from_json(const Json& j);

Json settings_to_json(const sdp::SolveSettings& s);
Json certificate_to_json(const ExtendibilityCertificate& c);
Json dual_certificate_to_json(const DualCertificate& c);
Json instance_to_json(const DiscriminationInstance& inst);
/// Result record with "schema": 1, the instance, primal, dual, gap, povm and certificate.
Json min_error_to_json(const DiscriminationInstance& inst, const MinErrorResult& r);
Json unambiguous_to_json(const DiscriminationInstance& inst, int target, const UnambiguousResult& r);

/// Header seed,sn,robustness,dh_ratio,status.
void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

}  // namespace pwf::io
