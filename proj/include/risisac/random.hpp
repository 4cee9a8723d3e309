// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "risisac/numkernel.hpp"

namespace risisac {

/// splitmix64 finaliser; used to derive seeds.
std::uint64_t mix_seed(std::uint64_t value);

/// Combine a seed with another 64-bit value into a new, well-mixed seed.
std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value);

/// Seeded random stream. Sampling is done with explicit bit manipulation
/// (not std::*_distribution) so draws are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent child stream keyed by `tag`; does not advance this stream.
  RandomStream fork(std::string_view tag) const;

  std::uint64_t seed() const { return seed_; }

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  Complex complex_normal();  // CN(0, 1): E|z|^2 = 1
  Complex unit_phase();      // exp(j*theta), theta ~ U[0, 2*pi)

  ComplexMatrix complex_normal_matrix(Index rows, Index cols);
  ComplexVector complex_normal_vector(Index size);
  ComplexVector unit_phase_vector(Index size);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace risisac
