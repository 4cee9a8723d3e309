// SPDX-License-Identifier: Apache-2.0
#include "risisac/random.hpp"

#include <cmath>
#include <numbers>

namespace risisac {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9E3779B97F4A7C15ULL;
  value = (value ^ (value >> 30)) * 0xBF58476D1CE4E5B9ULL;
  value = (value ^ (value >> 27)) * 0x94D049BB133111EBULL;
  return value ^ (value >> 31);
}

std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) {
  return mix_seed(mix_seed(seed) ^ (value + 0x632BE59BD9B4E019ULL + (seed << 6) + (seed >> 2)));
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

RandomStream RandomStream::fork(std::string_view tag) const {
  return RandomStream(combine_seed(seed_, fnv1a(tag)));
}

double RandomStream::uniform() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

Complex RandomStream::unit_phase() {
  return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
}

ComplexMatrix RandomStream::complex_normal_matrix(Index rows, Index cols) {
  ComplexMatrix out(rows, cols);
  // column-major fill order is part of the reproducibility contract
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) out(r, c) = complex_normal();
  return out;
}

ComplexVector RandomStream::complex_normal_vector(Index size) {
  ComplexVector out(size);
  for (Index i = 0; i < size; ++i) out(i) = complex_normal();
  return out;
}

ComplexVector RandomStream::unit_phase_vector(Index size) {
  ComplexVector out(size);
  for (Index i = 0; i < size; ++i) out(i) = unit_phase();
  return out;
}

}  // namespace risisac
