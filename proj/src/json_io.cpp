#include "csym/json_io.hpp"

#include <cmath>
#include <fstream>

namespace csym {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

double read_double(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string("expected a number for ") + what);
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(std::string("non-finite value for ") + what);
  return x;
}

cplx complex_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) bad(std::string("expected [re, im] for ") + what);
  return {read_double(j[0], what), read_double(j[1], what)};
}

}  // namespace

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.rows()}, {"data", std::move(rows)}};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("data")) bad("matrix JSON needs \"n\" and \"data\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) bad("matrix \"n\" must be a positive integer");
  const auto n = static_cast<std::size_t>(j["n"].get<long long>());
  const json& data = j["data"];
  if (!data.is_array() || data.size() != n) bad("matrix \"data\" must have n rows");
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!data[i].is_array() || data[i].size() != n) bad("matrix row " + std::to_string(i) + " must have n entries");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_from_json(data[i][k], "matrix entry");
  }
  return m;
}

json conjugation_to_json(const Conjugation& c) { return matrix_to_json(c.s()); }

Conjugation conjugation_from_json(const json& j) { return Conjugation(matrix_from_json(j)); }

json polynomial_to_json(const NcPolynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms)
    terms.push_back(json{{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"word", t.word}});
  return json{{"terms", std::move(terms)}};
}

NcPolynomial polynomial_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) bad("polynomial JSON needs \"terms\"");
  NcPolynomial p;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("word") || !t["word"].is_string()) bad("polynomial term needs a word");
    p.terms.push_back({{read_double(t.value("re", json(0.0)), "re"), read_double(t.value("im", json(0.0)), "im")},
                       t["word"].get<std::string>()});
  }
  try {
    p.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return p;
}

json shift_spec_to_json(const WeightedShiftSpec& spec) {
  json w = json::array();
  for (const auto& z : spec.weights) w.push_back(complex_to_json(z));
  return json{{"weights", std::move(w)},
              {"kind", spec.kind == ShiftKind::Unilateral ? "unilateral" : "bilateral-truncation"},
              {"symmetry_index", spec.symmetry_index ? json(*spec.symmetry_index) : json(nullptr)}};
}

WeightedShiftSpec shift_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array()) bad("shift spec needs \"weights\"");
  WeightedShiftSpec spec;
  for (const auto& z : j["weights"]) spec.weights.push_back(complex_from_json(z, "weight"));
  const std::string kind = j.value("kind", std::string("unilateral"));
  if (kind == "unilateral")
    spec.kind = ShiftKind::Unilateral;
  else if (kind == "bilateral-truncation")
    spec.kind = ShiftKind::BilateralTruncation;
  else
    bad("unknown shift kind: " + kind);
  if (j.contains("symmetry_index") && !j["symmetry_index"].is_null()) {
    if (!j["symmetry_index"].is_number_integer()) bad("symmetry_index must be an integer");
    spec.symmetry_index = j["symmetry_index"].get<int>();
  }
  return spec;
}

json binormal_spec_to_json(const BinormalSpec& spec) {
  json blocks = json::array();
  for (const auto& b : spec.blocks) blocks.push_back(matrix_to_json(b));
  return json{{"blocks", std::move(blocks)}};
}

BinormalSpec binormal_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].size() != 4)
    bad("binormal spec needs four blocks");
  BinormalSpec spec;
  for (std::size_t i = 0; i < 4; ++i) spec.blocks[i] = matrix_from_json(j["blocks"][i]);
  return spec;
}

json commutant_to_json(const CommutantReport& r) {
  return json{{"dimension", r.dimension}, {"gap", number(r.gap)}, {"threshold", r.threshold}, {"ambiguous", r.ambiguous}};
}

json perturbation_to_json(const PerturbationResult& r) {
  json diag = json::object();
  if (r.irreducible) {
    const auto& d = *r.irreducible;
    diag["eigenvalues"] = d.eigenvalues;
    diag["a_values"] = d.a_values;
    diag["fill"] = d.fill;
    diag["filled_entries"] = d.filled_entries;
    diag["basis"] = matrix_to_json(d.basis);
    if (d.commutant) {
      diag["commutant"] = commutant_to_json(*d.commutant);
      diag["irreducible"] = !d.commutant->ambiguous && d.commutant->dimension == 1;
    }
  }
  if (!r.removals.empty()) {
    json steps = json::array();
    for (const auto& s : r.removals)
      steps.push_back(json{{"lambda", complex_to_json(s.lambda)},
                           {"budget", s.budget},
                           {"kernel_dim", s.kernel_dim},
                           {"sigma_min_after", s.sigma_min_after},
                           {"no_op", s.no_op},
                           {"near_floor", s.near_floor},
                           {"retries", s.retries}});
    diag["removals"] = std::move(steps);
  }
  return json{{"k", matrix_to_json(r.k)},
              {"perturbed", matrix_to_json(r.perturbed)},
              {"conjugation_s", conjugation_to_json(r.certificate.conjugation)},
              {"residual", r.certificate.residual},
              {"norm_bound", r.norm_bound},
              {"diagnostics", std::move(diag)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

CMatrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

}  // namespace csym
