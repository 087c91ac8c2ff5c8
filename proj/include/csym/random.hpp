#pragma once

#include <cstdint>
#include <random>

#include "csym/matrix.hpp"

namespace csym {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for sub-stream `index` of `seed`. Per-sample randomness is a pure
/// function of (seed, index), so samples can be generated in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded generator. Built only on mt19937_64 raw output (fully specified by
/// the standard) so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal();
  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal();
  /// Uniform in the closed unit disk.
  cplx unit_disk();

 private:
  std::mt19937_64 engine_;
};

CMatrix gaussian_matrix(std::size_t n, Rng& rng);
CMatrix real_symmetric_gaussian(std::size_t n, Rng& rng);
CMatrix random_hermitian(std::size_t n, Rng& rng);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal made positive.
CMatrix haar_unitary(std::size_t n, Rng& rng);

/// Uniformly distributed unit vector in C^n.
CVector random_unit_vector(std::size_t n, Rng& rng);

}  // namespace csym
