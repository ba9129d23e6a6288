#include "kinetutor/simd/kernels.hpp"

namespace kinetutor::simd::scalar {

std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i + 12 <= bits.size(); i += 12) {
    unsigned code = 0;
    for (std::size_t j = 0; j < 12; ++j) code = (code << 1) | (bits[i + j] & 1u);
    sum += weights[code];
  }
  return sum;
}

void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out) {
  const std::size_t full = bits.size() / 8;
  for (std::size_t b = 0; b < full; ++b) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8; ++j) byte = (byte << 1) | (bits[b * 8 + j] & 1u);
    out[b] = static_cast<std::uint8_t>(byte);
  }
  if (const std::size_t rest = bits.size() % 8; rest != 0) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < rest; ++j) byte |= (bits[full * 8 + j] & 1u) << (7 - j);
    out[full] = static_cast<std::uint8_t>(byte);
  }
}

}  // namespace kinetutor::simd::scalar
