#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kinetutor/domain.hpp"
#include "kinetutor/genome.hpp"
#include "kinetutor/stores.hpp"

namespace kinetutor {

struct FitnessReport {
  int value = 0;
  int max_value = 0;
  std::vector<int> matched_counts;  // one per 12-bit group
};

/// tuples_per_chromosome x (largest var_count in the domain): the all-unknown worst case.
int max_fitness(const GaConfig& config, const Domain& domain);

/// Lower is fitter. Each tuple whose (e, v) is valid subtracts the number of knowns
/// sharing its (object, equation, zone); the known's variable does not matter.
FitnessReport fitness(const Chromosome& chromosome, const KnownsStore& knowns, const GaConfig& config,
                      const Domain& domain);

/// Per-code reduction for one snapshot of the knowns store. weight(code) is the
/// amount a tuple with that 12-bit code subtracts from the maximum.
class FitnessTable {
 public:
  FitnessTable(const KnownsStore& knowns, const Domain& domain);

  std::int32_t weight(std::uint16_t code) const { return weights_[code]; }
  const std::array<std::int32_t, 4096>& weights() const { return weights_; }

  /// Uses the dispatched SIMD kernel.
  int evaluate(const Chromosome& chromosome, int max_value) const;

 private:
  std::array<std::int32_t, 4096> weights_{};
};

/// Fitness of every member against one knowns snapshot.
std::vector<int> evaluate_population(const Population& population, const KnownsStore& knowns,
                                     const GaConfig& config, const Domain& domain);

}  // namespace kinetutor
