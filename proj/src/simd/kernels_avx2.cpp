// Compiled with -mavx2; only reached through the runtime dispatcher.

#include "kinetutor/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

namespace kinetutor::simd::avx2 {

namespace {

// Two 12-bit groups per 32-byte load: dwords 0..2 hold group A, 3..5 group B.
// After the permute each 128-bit lane starts with one group.
inline std::uint32_t decode_pair(const std::uint8_t* p, __m256i lane_split, __m256i reverse12) {
  __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
  v = _mm256_permutevar8x32_epi32(v, lane_split);
  v = _mm256_shuffle_epi8(v, reverse12);
  v = _mm256_cmpgt_epi8(v, _mm256_setzero_si256());
  // bit k of each lane's 16-bit mask = group byte (11 - k); bits 12..15 are zeroed by the shuffle.
  return static_cast<std::uint32_t>(_mm256_movemask_epi8(v));
}

}  // namespace

std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights) {
  const __m256i lane_split = _mm256_setr_epi32(0, 1, 2, 0, 3, 4, 5, 3);
  const __m256i reverse12 = _mm256_setr_epi8(11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0, -128, -128, -128, -128,
                                             11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0, -128, -128, -128, -128);
  const __m128i low12 = _mm_set1_epi32(0xFFF);
  const auto* table = reinterpret_cast<const int*>(weights.data());

  const std::uint8_t* data = bits.data();
  const std::size_t groups = bits.size() / 12;
  __m256i acc = _mm256_setzero_si256();
  std::size_t g = 0;
  // Eight groups per step; the last load of a step reads 8 bytes past its pair.
  for (; (g + 8) * 12 + 8 <= bits.size(); g += 8) {
    const std::uint8_t* p = data + g * 12;
    const __m128i masks = _mm_setr_epi32(
        static_cast<int>(decode_pair(p, lane_split, reverse12)),
        static_cast<int>(decode_pair(p + 24, lane_split, reverse12)),
        static_cast<int>(decode_pair(p + 48, lane_split, reverse12)),
        static_cast<int>(decode_pair(p + 72, lane_split, reverse12)));
    const __m256i codes = _mm256_set_m128i(_mm_srli_epi32(masks, 16), _mm_and_si128(masks, low12));
    acc = _mm256_add_epi32(acc, _mm256_i32gather_epi32(table, codes, 4));
  }

  alignas(32) std::int32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::int64_t sum = 0;
  for (auto lane : lanes) sum += lane;
  if (g < groups) {
    sum += scalar::weighted_group_sum(bits.subspan(g * 12), weights);
  }
  return sum;
}

void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out) {
  // Reverse each run of 8 bytes so movemask puts the first bit in the MSB.
  const __m256i reverse8 = _mm256_setr_epi8(7, 6, 5, 4, 3, 2, 1, 0, 15, 14, 13, 12, 11, 10, 9, 8,
                                            7, 6, 5, 4, 3, 2, 1, 0, 15, 14, 13, 12, 11, 10, 9, 8);
  std::size_t i = 0;
  for (; i + 32 <= bits.size(); i += 32) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits.data() + i));
    v = _mm256_shuffle_epi8(v, reverse8);
    v = _mm256_cmpgt_epi8(v, _mm256_setzero_si256());
    const auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(v));
    std::memcpy(out.data() + i / 8, &mask, sizeof mask);
  }
  if (i < bits.size()) {
    scalar::pack_bits(bits.subspan(i), out.subspan(i / 8));
  }
}

}  // namespace kinetutor::simd::avx2

#else

namespace kinetutor::simd::avx2 {

std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights) {
  return scalar::weighted_group_sum(bits, weights);
}

void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out) {
  scalar::pack_bits(bits, out);
}

}  // namespace kinetutor::simd::avx2

#endif
