#include <doctest.h>

#include <array>

#include "kinetutor/rng.hpp"
#include "kinetutor/simd/kernels.hpp"

using namespace kinetutor;

namespace {

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() & 1);
  return bits;
}

struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::force_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("weighted group sum matches the scalar reference") {
  Rng rng(21);
  std::array<std::int32_t, 4096> weights{};
  for (auto& w : weights) w = static_cast<std::int32_t>(rng.below(11));
  for (std::size_t groups : {0u, 1u, 2u, 3u, 7u, 8u, 31u, 1000u}) {
    const auto bits = random_bits(rng, groups * 12);
    const auto expected = simd::scalar::weighted_group_sum(bits, weights);
    std::int64_t brute = 0;
    for (std::size_t g = 0; g < groups; ++g) {
      int code = 0;
      for (int i = 0; i < 12; ++i) code = code * 2 + bits[g * 12 + i];
      brute += weights[code];
    }
    CHECK(expected == brute);
    CHECK(simd::weighted_group_sum(bits, weights) == expected);
    if (simd::detected_isa() == simd::Isa::avx2) CHECK(simd::avx2::weighted_group_sum(bits, weights) == expected);
  }
}

TEST_CASE("bit packing matches the scalar reference") {
  Rng rng(22);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 32u, 33u, 255u, 256u, 12000u}) {
    const auto bits = random_bits(rng, n);
    std::vector<std::uint8_t> expected((n + 7) / 8), got((n + 7) / 8);
    simd::scalar::pack_bits(bits, expected);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(((expected[i / 8] >> (7 - i % 8)) & 1) == bits[i]);
    }
    simd::pack_bits(bits, got);
    CHECK(got == expected);
    if (simd::detected_isa() == simd::Isa::avx2) {
      std::vector<std::uint8_t> wide((n + 7) / 8);
      simd::avx2::pack_bits(bits, wide);
      CHECK(wide == expected);
    }
  }
}

TEST_CASE("dispatch can be pinned to scalar") {
  IsaGuard guard;
  CHECK(simd::force_isa(simd::Isa::scalar) == simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  CHECK(simd::force_isa(simd::Isa::avx2) == simd::detected_isa());
  CHECK(simd::to_string(simd::Isa::scalar) == "scalar");
}

}  // TEST_SUITE
