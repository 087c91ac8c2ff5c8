#include "csym/random.hpp"

#include <cmath>
#include <numbers>

namespace csym {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix_seed(mix_seed(seed) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} / span) * span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (limit != 0 && x >= limit);
  return lo + static_cast<std::int64_t>(span == 0 ? x : x % span);
}

double Rng::normal() {
  // Box-Muller; u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx{re, im} / std::numbers::sqrt2;
}

cplx Rng::unit_disk() {
  const double r = std::sqrt(uniform());
  const double theta = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, theta);
}

CMatrix gaussian_matrix(std::size_t n, Rng& rng) {
  CMatrix m(n);
  for (auto& z : m.data()) z = rng.complex_normal();
  return m;
}

CMatrix real_symmetric_gaussian(std::size_t n, Rng& rng) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.normal();
  return 0.5 * (m + m.transpose());
}

CMatrix random_hermitian(std::size_t n, Rng& rng) {
  const CMatrix g = gaussian_matrix(n, rng);
  return 0.5 * (g + g.adjoint());
}

CMatrix haar_unitary(std::size_t n, Rng& rng) {
  CMatrix z = gaussian_matrix(n, rng);
  // Modified Gram-Schmidt with one reorthogonalization pass; the implied R has
  // a positive diagonal, which is the phase convention for Haar measure.
  CMatrix q(n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector x = z.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx h = 0.0;
        for (std::size_t i = 0; i < n; ++i) h += std::conj(q(i, k)) * x[i];
        for (std::size_t i = 0; i < n; ++i) x[i] -= h * q(i, k);
      }
    }
    const double nx = norm2(x);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = x[i] / nx;
  }
  return q;
}

CVector random_unit_vector(std::size_t n, Rng& rng) {
  CVector x(n);
  for (auto& z : x) z = rng.complex_normal();
  const double nx = norm2(x);
  for (auto& z : x) z /= nx;
  return x;
}

}  // namespace csym
