#pragma once

#include <string>

#include <json.hpp>

#include "csym/commutant.hpp"
#include "csym/conjugation.hpp"
#include "csym/matrix.hpp"
#include "csym/models.hpp"
#include "csym/perturb.hpp"
#include "csym/symmetry.hpp"

namespace csym {

using json = nlohmann::json;

/// {"n": n, "data": [[[re, im], ...], ...]}, row-major. Parse errors throw
/// InvalidInput.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// A conjugation serializes as its s matrix.
json conjugation_to_json(const Conjugation& c);
Conjugation conjugation_from_json(const json& j);

/// {"terms": [{"re": .., "im": .., "word": "zww"}, ...]}
json polynomial_to_json(const NcPolynomial& p);
NcPolynomial polynomial_from_json(const json& j);

/// {"weights": [[re, im], ...], "kind": "unilateral" | "bilateral-truncation",
///  "symmetry_index": k | null}
json shift_spec_to_json(const WeightedShiftSpec& spec);
WeightedShiftSpec shift_spec_from_json(const json& j);

/// {"blocks": [N11, N12, N21, N22]} with each block in matrix form.
json binormal_spec_to_json(const BinormalSpec& spec);
BinormalSpec binormal_spec_from_json(const json& j);

/// {"dimension", "gap", "threshold", "ambiguous"}; the basis is omitted.
json commutant_to_json(const CommutantReport& r);

/// {k, perturbed, conjugation_s, residual, norm_bound, diagnostics}
json perturbation_to_json(const PerturbationResult& r);

/// Non-finite doubles become null.
json number(double x);
json complex_to_json(cplx z);

CMatrix read_matrix_file(const std::string& path);
json read_json_file(const std::string& path);

}  // namespace csym
