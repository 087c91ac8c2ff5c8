#include <doctest.h>

#include <cmath>

#include "csym/commutant.hpp"
#include "csym/linalg.hpp"
#include "csym/models.hpp"
#include "csym/perturb.hpp"
#include "csym/random.hpp"
#include "oracles.hpp"

using namespace csym;

namespace {

const cplx I{0.0, 1.0};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidInput;
}

void check_contract(const PerturbationResult& r, const CMatrix& t, const Conjugation& c, double eps) {
  CHECK(r.norm_bound < eps);
  CHECK(operator_norm(r.k) < eps);
  CHECK((r.perturbed - t - r.k).frobenius_norm() <= 1e-14 * (1.0 + t.frobenius_norm()));
  CHECK(c_symmetry_residual(r.perturbed, c) <= 1e-8);
  CHECK(r.certificate.residual <= 1e-8);
}

}  // namespace

TEST_CASE("make_irreducible_cso on diag(1, 2)") {
  const CMatrix t = CMatrix::diagonal({1.0, 2.0});
  const auto c = canonical_conjugation(2);
  const auto r = make_irreducible_cso(t, c, 0.1);
  check_contract(r, t, c, 0.1);
  // Real part: d_j + j eps/(4n) with j = 0, 1.
  CHECK(std::abs(r.perturbed(0, 0).real() - 1.0) <= 1e-14);
  CHECK(std::abs(r.perturbed(1, 1).real() - 2.0125) <= 1e-14);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::abs(std::abs(r.perturbed(i, j).imag()) - 0.005) <= 1e-15);
      if (i != j) CHECK(std::abs(r.perturbed(i, j).real()) <= 1e-15);
    }
  CHECK(oracle::commutant_dimension_gaussian(r.perturbed) == 1);
  REQUIRE(r.irreducible.has_value());
  CHECK(r.irreducible->fill == doctest::Approx(0.005));
  CHECK(r.irreducible->filled_entries == 4);
}

TEST_CASE("make_irreducible_cso on the zero matrix") {
  const CMatrix t(3);
  const auto c = canonical_conjugation(3);
  const auto r = make_irreducible_cso(t, c, 0.3);
  check_contract(r, t, c, 0.3);
  const double f = 0.3 / 45.0;
  const double a[3] = {0.0, 0.025, 0.05};
  // The construction may pick any orthogonal eigenbasis of 0; compare spectra of
  // the Hermitian parts instead of entries.
  const auto re = hermitian_eig(hermitian_part(r.perturbed));
  for (std::size_t j = 0; j < 3; ++j) CHECK(re.values[j] == doctest::Approx(a[j]).epsilon(1e-12));
  const auto v = r.irreducible->basis;
  const CMatrix in_basis = v.adjoint() * r.perturbed * v;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(in_basis(i, j).imag()) == doctest::Approx(f).epsilon(1e-12));
      CHECK(std::abs(in_basis(i, j).real() - (i == j ? a[i] : 0.0)) <= 1e-14);
    }
  CHECK(oracle::commutant_dimension_gaussian(r.perturbed) == 1);
}

TEST_CASE("make_irreducible_cso on an already generic operator uses the spreading term only") {
  // Simple real part, all-nonzero imaginary part well above the fill level.
  const CMatrix t{{cplx{0.0, 1.0}, cplx{0.0, 0.5}}, {cplx{0.0, 0.5}, cplx{3.0, 2.0}}};
  const auto c = canonical_conjugation(2);
  const double eps = 0.01;
  const auto r = make_irreducible_cso(t, c, eps);
  check_contract(r, t, c, eps);
  CHECK(r.irreducible->filled_entries == 0);
  CHECK(r.norm_bound <= eps / 4 + 1e-15);
  CHECK(oracle::commutant_dimension_gaussian(r.perturbed) == 1);
}

TEST_CASE("make_irreducible_cso over random operators") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const auto pair = seed % 2 ? random_cso(n, seed) : random_reducible_cso(n, seed);
    for (double eps : {1e-1, 1e-3}) {
      const auto r = make_irreducible_cso(pair.t, pair.c, eps);
      check_contract(r, pair.t, pair.c, eps);
      REQUIRE(r.irreducible->commutant.has_value());
      CHECK(r.irreducible->commutant->dimension == 1);
      CHECK(r.irreducible->commutant->gap >= 10.0);
      const auto& a = r.irreducible->a_values;
      for (std::size_t j = 1; j < a.size(); ++j) CHECK(a[j] > a[j - 1]);
    }
  }
}

TEST_CASE("imaginary-part variant") {
  const auto pair = random_reducible_cso(5, 17);
  IrreducibleOptions opts;
  opts.part = SpreadPart::Imaginary;
  const auto r = make_irreducible_cso(pair.t, pair.c, 0.05, opts);
  check_contract(r, pair.t, pair.c, 0.05);
  CHECK(is_irreducible(r.perturbed));
}

TEST_CASE("make_irreducible_cso error paths") {
  const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
  CHECK(kind_of([&] { make_irreducible_cso(j, canonical_conjugation(2), 0.1); }) == ErrorKind::NotCSymmetric);
  CHECK(kind_of([&] { make_irreducible_cso(j, Conjugation(CMatrix::flip(2)), 1e-20); }) == ErrorKind::EpsTooSmall);
  CHECK(kind_of([&] { make_irreducible_cso(j, Conjugation(CMatrix::flip(2)), -1.0); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { make_irreducible_cso(j, canonical_conjugation(3), 0.1); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("remove_point examples") {
  SUBCASE("Jordan block") {
    const auto jb = jordan_block(2, 0.0);
    const auto r = remove_point(jb.t, jb.c, 0.0, 0.1);
    check_contract(r, jb.t, jb.c, 0.1);
    const CMatrix expected{{0.0, 1.0}, {0.05, 0.0}};
    CHECK((r.perturbed - expected).frobenius_norm() <= 1e-16);
    const cplx det = r.perturbed(0, 0) * r.perturbed(1, 1) - r.perturbed(0, 1) * r.perturbed(1, 0);
    CHECK(std::abs(det - cplx{-0.05, 0.0}) <= 1e-16);
    CHECK(std::abs(r.norm_bound - 0.05) <= 1e-12);
    const auto ev = eig_general(r.perturbed);
    CHECK(ev[0].real() == doctest::Approx(-std::sqrt(0.05)).epsilon(1e-12));
    CHECK(ev[1].real() == doctest::Approx(std::sqrt(0.05)).epsilon(1e-12));
  }
  SUBCASE("scalar zero") {
    const auto r = remove_point(CMatrix(1), canonical_conjugation(1), 0.0, 0.2);
    CHECK(std::abs(r.perturbed(0, 0) - 0.1) <= 1e-16);
  }
  SUBCASE("diagonal") {
    const CMatrix t = CMatrix::diagonal({0.0, 3.0});
    const auto r = remove_point(t, canonical_conjugation(2), 0.0, 0.1);
    CHECK((r.perturbed - CMatrix::diagonal({0.05, 3.0})).frobenius_norm() <= 1e-16);
    REQUIRE(r.removals.size() == 1);
    CHECK(r.removals[0].kernel_dim == 1);
    CHECK_FALSE(r.removals[0].no_op);
  }
  SUBCASE("resolvent point is a no-op") {
    const CMatrix t = CMatrix::diagonal({0.0, 3.0});
    const auto r = remove_point(t, canonical_conjugation(2), 1.0, 0.1);
    CHECK(r.k == CMatrix(2));
    CHECK(r.perturbed == t);
    REQUIRE(r.removals.size() == 1);
    CHECK(r.removals[0].no_op);
  }
}

TEST_CASE("remove_point on engineered spectra") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const cplx lambda = rng.complex_normal();
    const std::size_t k = 1 + seed % 3;
    const auto base = random_cso(2 + seed % 3, seed + 500);
    std::vector<CMatrix> parts{base.t, CMatrix::diagonal(std::vector<cplx>(k, lambda))};
    std::vector<std::optional<Conjugation>> conjs{base.c, canonical_conjugation(k)};
    const auto sum = direct_sum(parts, conjs);
    const auto moved = conjugate_by_unitary(sum.t, *sum.c, haar_unitary(sum.t.n(), rng));
    const double eps = 0.05;
    const auto r = remove_point(moved.t, moved.c, lambda, eps);
    check_contract(r, moved.t, moved.c, eps);
    CHECK(std::abs(r.norm_bound - eps / 2) <= 1e-12);
    const CMatrix shifted = r.perturbed - lambda * CMatrix::identity(moved.t.n());
    CHECK(min_singular_value(shifted) > 1e-10 * std::max(1.0, operator_norm(moved.t)));
    CHECK(r.removals[0].kernel_dim == k);
  }
}

TEST_CASE("remove_points examples") {
  SUBCASE("two points") {
    const CMatrix t = CMatrix::diagonal({0.0, 1.0, 1.0});
    const auto c = canonical_conjugation(3);
    const std::vector<cplx> lambdas{0.0, 1.0};
    const auto r = remove_points(t, c, lambdas, 0.1);
    check_contract(r, t, c, 0.1);
    for (const auto& z : eig_general(r.perturbed)) {
      CHECK(std::abs(z) > 1e-8);
      CHECK(std::abs(z - 1.0) > 1e-8);
    }
  }
  SUBCASE("single point matches remove_point") {
    const auto jb = jordan_block(3, I);
    const std::vector<cplx> lambdas{I};
    const auto many = remove_points(jb.t, jb.c, lambdas, 0.2);
    const auto one = remove_point(jb.t, jb.c, I, 0.1);
    CHECK((many.k - one.k).frobenius_norm() <= 1e-15);
  }
  SUBCASE("zero matrix") {
    const std::vector<cplx> lambdas{0.0};
    const auto r = remove_points(CMatrix(2), canonical_conjugation(2), lambdas, 0.2);
    CHECK((r.perturbed - 0.05 * CMatrix::identity(2)).frobenius_norm() <= 1e-16);
  }
}

TEST_CASE("remove_points rejects bad input") {
  const std::vector<cplx> none;
  CHECK_THROWS_AS(remove_points(CMatrix(2), canonical_conjugation(2), none, 0.1), Error);
  const std::vector<cplx> dup{0.0, 0.0};
  CHECK_THROWS_AS(remove_points(CMatrix(2), canonical_conjugation(2), dup, 0.1), Error);
  const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
  CHECK(kind_of([&] { remove_point(j, canonical_conjugation(2), 0.0, 0.1); }) == ErrorKind::NotCSymmetric);
}
