#include <doctest.h>

#include <cmath>

#include "csym/json_io.hpp"
#include "csym/linalg.hpp"
#include "csym/models.hpp"
#include "csym/random.hpp"
#include "csym/symmetry.hpp"

using namespace csym;

namespace {

const cplx I{0.0, 1.0};

NcPolynomial poly(std::initializer_list<NcTerm> terms) { return NcPolynomial{terms}; }

// Non-normal 3x3 matrices whose trace defect rules out complex symmetry.
CMatrix obstructed(std::uint64_t seed) {
  for (std::uint64_t k = 0;; ++k) {
    Rng rng(derive_seed(seed, k));
    const CMatrix t = gaussian_matrix(3, rng);
    if (trace_defect(t, obstruction_polynomials()) > 1e-6) return t;
  }
}

}  // namespace

TEST_CASE("c_symmetry_residual examples") {
  CHECK(c_symmetry_residual(CMatrix::diagonal({1.0 + I, 2.0}), canonical_conjugation(2)) == 0.0);
  const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
  CHECK(c_symmetry_residual(j, Conjugation(CMatrix::flip(2))) == 0.0);
  CHECK(c_symmetry_residual(j, canonical_conjugation(2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(c_symmetry_residual(j, canonical_conjugation(3)), Error);
}

TEST_CASE("c_symmetry_residual is covariant under unitary similarity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 6;
    Rng rng(seed);
    const CMatrix t = gaussian_matrix(n, rng);  // residual need not be small
    const auto c = random_conjugation(n, seed + 9);
    const CMatrix u = haar_unitary(n, rng);
    const auto moved = conjugate_by_unitary(t, c, u);
    CHECK(std::abs(c_symmetry_residual(t, c) - c_symmetry_residual(moved.t, moved.c)) <= 1e-9);
  }
}

TEST_CASE("find_conjugation examples") {
  SUBCASE("symmetric input uses the canonical conjugation") {
    Rng rng(1);
    CMatrix t = gaussian_matrix(4, rng);
    t = 0.5 * (t + t.transpose());
    const auto r = find_conjugation(t, 5, 500);
    REQUIRE(r.found());
    CHECK(r.certificate->conjugation.s() == CMatrix::identity(4));
    CHECK(r.certificate->residual == 0.0);
  }
  SUBCASE("unitarily rotated symmetric matrix") {
    Rng rng(2);
    CMatrix m = gaussian_matrix(4, rng);
    m = 0.5 * (m + m.transpose());
    const CMatrix u = haar_unitary(4, rng);
    const CMatrix t = u * m * u.adjoint();
    // Analytic witness s = U U^T.
    CHECK(c_symmetry_residual(t, Conjugation(u * u.transpose())) <= 1e-12);
    const auto r = find_conjugation(t, 5, 500);
    REQUIRE(r.found());
    CHECK(r.certificate->residual <= 1e-8);
    CHECK(verify_conjugation(r.certificate->conjugation).valid(4));
    CHECK(c_symmetry_residual(t, r.certificate->conjugation) <= 1e-8);
  }
  SUBCASE("obstructed input is not found") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const CMatrix t = obstructed(seed);
      const auto r = find_conjugation(t, 5, 500);
      CHECK_FALSE(r.found());
      CHECK(r.best_residual > 1e-8);
    }
  }
}

TEST_CASE("find_conjugation succeeds on sampled complex symmetric operators") {
  int found = 0;
  const int trials = 200;
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = 2 + k % 7;
    const auto pair = random_cso(n, derive_seed(0xF1, k));
    const auto r = find_conjugation(pair.t);
    if (r.found() && r.certificate->residual <= 1e-8) ++found;
  }
  CHECK(found >= 0.95 * trials);
}

TEST_CASE("find_conjugation on Jordan blocks and shifts") {
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto r = find_conjugation(jordan_block(n, cplx{0.5, -1.0}).t);
    REQUIRE(r.found());
    CHECK(r.certificate->residual <= 1e-8);
  }
}

TEST_CASE("word_eval examples") {
  const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
  const CMatrix prod = word_eval(poly({{1.0, "zw"}}), j.adjoint(), j);
  CHECK(prod == j.adjoint() * j);
  CHECK(prod == CMatrix::diagonal({0.0, 1.0}));

  CHECK(word_eval(poly({{1.0, ""}}), j, j) == CMatrix::identity(2));

  Rng rng(4);
  const CMatrix a = gaussian_matrix(3, rng);
  CHECK((word_eval(poly({{2.0, "z"}, {-1.0, "w"}}), a, a) - a).frobenius_norm() <= 1e-15);
  CHECK_THROWS_AS(word_eval(poly({{1.0, "z"}}), a, j), Error);
}

TEST_CASE("NcPolynomial validation") {
  CHECK_THROWS_AS(poly({}).validate(), Error);
  CHECK_THROWS_AS(poly({{1.0, "zx"}}).validate(), Error);
  CHECK_THROWS_AS(poly({{1.0, "zwzwzwzwz"}}).validate(), Error);
  CHECK_NOTHROW(poly({{1.0, "zwzwzwzw"}}).validate());
  CHECK(poly({{1.0, "zw"}, {I, "zzw"}}).degree() == 3);
  CHECK(poly({{1.0 + I, "z"}}).conjugate_coefficients().terms[0].coeff == 1.0 - I);
}

TEST_CASE("gnormal_defect examples") {
  Rng rng(5);
  const CMatrix d = CMatrix::diagonal({1.0 + I, -2.0, 0.5 * I});
  CHECK(gnormal_defect(d, standard_polynomials()) <= 1e-10);
  CHECK(gnormal_defect(random_normal(5, 3), standard_polynomials()) <= 1e-10);

  const auto pair = random_cso(5, 21);
  CHECK(gnormal_defect(pair.t, random_polynomials(50, 99)) <= 1e-8);

  const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
  const std::vector<NcPolynomial> comm{poly({{1.0, "zw"}, {-1.0, "wz"}})};
  CHECK(gnormal_defect(j, comm) <= 1e-15);
}

TEST_CASE("trace_defect examples") {
  Rng rng(6);
  CMatrix t = gaussian_matrix(4, rng);
  t = 0.5 * (t + t.transpose());
  const double scale = 1.0 + operator_norm(t);
  CHECK(trace_defect(t, standard_polynomials()) <= 1e-10 * 4 * std::pow(scale, 4));

  const CMatrix d = CMatrix::diagonal({I, -I});
  const std::vector<NcPolynomial> zww{poly({{1.0, "zww"}})};
  // p(T*, T) = T* T T = diag(i, -i); p~(T, T*) = T T* T* = diag(-i, i); traces are 0.
  CHECK(trace_defect(d, zww) <= 1e-15);

  const std::vector<NcPolynomial> empty_word{poly({{1.0, ""}})};
  CHECK(trace_defect(gaussian_matrix(3, rng), empty_word) == 0.0);
}

TEST_CASE("defects vanish on certified operators") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pair = random_cso(2 + seed % 5, seed + 300);
    CHECK(c_symmetry_residual(pair.t, pair.c) <= 1e-10);
    CHECK(gnormal_defect(pair.t, standard_polynomials()) <= 1e-8);
    CHECK(trace_defect(pair.t, standard_polynomials()) <= 1e-8 * std::pow(1.0 + operator_norm(pair.t), 4));
  }
}

TEST_CASE("gnormal_defect is invariant under unimodular scaling") {
  const std::vector<NcPolynomial> set{poly({{1.0, "zw"}}), poly({{1.0, "wz"}}), poly({{1.0, "z"}}),
                                      poly({{1.0, "w"}})};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const CMatrix t = gaussian_matrix(3 + seed % 3, rng);
    const cplx lambda = std::polar(1.0, 2.0 * M_PI * rng.uniform());
    CHECK(std::abs(gnormal_defect(lambda * t, set) - gnormal_defect(t, set)) <= 1e-10);
  }
}

TEST_CASE("standard polynomials are fixed and match the shipped data file") {
  const auto& polys = standard_polynomials();
  REQUIRE(polys.size() == 50);
  for (const auto& p : polys) {
    CHECK_NOTHROW(p.validate());
    CHECK(p.terms.size() >= 1);
    CHECK(p.terms.size() <= 5);
    for (const auto& term : p.terms) {
      CHECK(term.word.size() >= 1);
      CHECK(term.word.size() <= 4);
      CHECK(std::abs(term.coeff) <= 1.0);
    }
  }
  const json file = read_json_file(std::string(CSYM_SOURCE_DIR) + "/data/standard_polynomials.json");
  CHECK(file.at("seed") == kStandardPolySeed);
  const json& shipped = file.at("polynomials");
  REQUIRE(shipped.is_array());
  REQUIRE(shipped.size() == polys.size());
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const auto p = polynomial_from_json(shipped[k]);
    REQUIRE(p.terms.size() == polys[k].terms.size());
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
      CHECK(p.terms[i].word == polys[k].terms[i].word);
      CHECK(p.terms[i].coeff == polys[k].terms[i].coeff);
    }
  }
}

TEST_CASE("short words carry no trace obstruction") {
  // Every word of length <= 4 is a rotation of its reversal.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const CMatrix t = gaussian_matrix(2 + seed % 4, rng);
    const double scale = std::pow(1.0 + operator_norm(t), 4);
    CHECK(trace_defect(t, standard_polynomials()) <= 1e-12 * t.n() * scale);
  }
}

TEST_CASE("obstruction words are chiral necklaces") {
  const auto canon = [](const std::string& w) {
    std::string best = w;
    for (std::size_t i = 1; i < w.size(); ++i) best = std::min(best, w.substr(i) + w.substr(0, i));
    return best;
  };
  std::vector<std::string> seen;
  for (const auto& p : obstruction_polynomials()) {
    REQUIRE(p.terms.size() == 1);
    const std::string& w = p.terms[0].word;
    CHECK(w.size() >= 6);
    CHECK(w.size() <= 8);
    const std::string rev(w.rbegin(), w.rend());
    CHECK(canon(w) != canon(rev));
    for (const auto& other : seen) {
      CHECK(canon(other) != canon(w));
      CHECK(canon(other) != canon(rev));
    }
    seen.push_back(w);
  }
}

TEST_CASE("obstruction defect vanishes on certified operators and not on generic ones") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pair = random_cso(2 + seed % 5, seed + 900);
    const double scale = std::pow(1.0 + operator_norm(pair.t), 8);
    CHECK(trace_defect(pair.t, obstruction_polynomials()) <= 1e-10 * pair.t.n() * scale);
    Rng rng(seed);
    CHECK(trace_defect(gaussian_matrix(3, rng), obstruction_polynomials()) > 1e-6);
  }
}
