#pragma once

// Reference implementations written straight from the algorithm descriptions,
// sharing no code with src/. Tests compare the library against these.

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

struct Known {
  int object, eqn, var, zone;
};

/// Chromosome fitness as a plain nested loop over tuples and knowns.
inline int fitness(const std::vector<std::uint8_t>& bits, const std::vector<Known>& knowns,
                   const std::vector<int>& var_counts, int max_var_count) {
  const int delta = 12;
  int f = static_cast<int>(bits.size()) / delta * max_var_count;
  for (std::size_t i = 0; i + delta <= bits.size(); i += delta) {
    const int n = bits[i] * 4 + bits[i + 1] * 2 + bits[i + 2];
    const int e = bits[i + 3] * 4 + bits[i + 4] * 2 + bits[i + 5];
    const int v = bits[i + 6] * 4 + bits[i + 7] * 2 + bits[i + 8];
    const int z = bits[i + 9] * 4 + bits[i + 10] * 2 + bits[i + 11];
    const bool valid = e >= 1 && e <= static_cast<int>(var_counts.size()) && v >= 1 && v <= var_counts[e - 1];
    if (valid) {
      int c = 0;
      for (const Known& k : knowns) {
        if (k.object == n && k.eqn == e && k.zone == z) c = c + 1;
      }
      f = f - c;
    }
  }
  return f;
}

/// MSB-first packing with a zero-padded final byte.
inline std::vector<std::uint8_t> pack(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (0x80 >> (i % 8)));
  }
  return out;
}

}  // namespace oracle
