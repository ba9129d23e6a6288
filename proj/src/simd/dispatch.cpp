#include <atomic>
#include <cstdlib>
#include <string>

#include "kinetutor/simd/kernels.hpp"

namespace kinetutor::simd {

namespace {

Isa probe() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa initial_isa() {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("KINETUTOR_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

std::int64_t weighted_group_sum(std::span<const std::uint8_t> bits, WeightTable weights) {
  if (active_isa() == Isa::avx2) return avx2::weighted_group_sum(bits, weights);
  return scalar::weighted_group_sum(bits, weights);
}

void pack_bits(std::span<const std::uint8_t> bits, std::span<std::uint8_t> out) {
  if (active_isa() == Isa::avx2) return avx2::pack_bits(bits, out);
  scalar::pack_bits(bits, out);
}

}  // namespace kinetutor::simd
