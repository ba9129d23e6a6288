#pragma once

// Bit-level inner loops shared by fitness evaluation and bitstream export.
// Each kernel has a portable scalar reference and an AVX2 variant; the
// dispatcher picks one at first use from CPUID. Set KINETUTOR_ISA=scalar
// to pin the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace kinetutor::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set the running CPU supports (and this build compiled).
Isa detected_isa();
/// Instruction set the dispatched kernels currently use.
Isa active_isa();
/// Overrides dispatch; falls back to scalar if the request is unsupported. Returns the ISA in effect.
Isa force_isa(Isa isa);

using WeightTable = std::span<const std::int32_t, 4096>;

/// Sums weights[code] over every 12-bit group of a 0/1-per-byte bit string.
/// bits.size() must be a multiple of 12.
std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights);

/// Packs 0/1 bytes MSB first. out.size() must be (bits.size() + 7) / 8.
void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out);

namespace scalar {
std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights);
void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out);
}  // namespace scalar

namespace avx2 {
/// Only call when detected_isa() == Isa::avx2.
std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights);
void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out);
}  // namespace avx2

}  // namespace kinetutor::simd
