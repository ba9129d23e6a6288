#include "kinetutor/fitness.hpp"

#include "kinetutor/error.hpp"
#include "kinetutor/simd/kernels.hpp"

namespace kinetutor {

namespace {

// knowns per (object, equation, zone), indexed n*64 + e*8 + z
std::array<std::int32_t, 512> count_by_object_equation_zone(const KnownsStore& knowns) {
  std::array<std::int32_t, 512> counts{};
  for (const auto& k : knowns.entries()) counts[static_cast<std::size_t>(k.object * 64 + k.eqn * 8 + k.zone)]++;
  return counts;
}

}  // namespace

int max_fitness(const GaConfig& config, const Domain& domain) {
  return config.tuples_per_chromosome() * domain.max_var_count();
}

FitnessReport fitness(const Chromosome& chromosome, const KnownsStore& knowns, const GaConfig& config,
                      const Domain& domain) {
  if (chromosome.size() != static_cast<std::size_t>(config.chromosome_bits)) {
    throw Error(ErrorCode::malformed_chromosome,
                "chromosome has " + std::to_string(chromosome.size()) + " bits, config expects " +
                    std::to_string(config.chromosome_bits));
  }
  const auto counts = count_by_object_equation_zone(knowns);
  FitnessReport report;
  report.max_value = max_fitness(config, domain);
  report.value = report.max_value;
  report.matched_counts.resize(chromosome.tuple_count(), 0);
  for (std::size_t g = 0; g < chromosome.tuple_count(); ++g) {
    const auto t = decode_tuple(chromosome, g);
    if (!domain.is_valid(t.e, t.v)) continue;
    const int matched = counts[static_cast<std::size_t>(t.n * 64 + t.e * 8 + t.z)];
    report.matched_counts[g] = matched;
    report.value -= matched;
  }
  return report;
}

FitnessTable::FitnessTable(const KnownsStore& knowns, const Domain& domain) {
  const auto counts = count_by_object_equation_zone(knowns);
  for (std::uint16_t code = 0; code < 4096; ++code) {
    const auto t = QuadTuple::from_code(code);
    weights_[code] = domain.is_valid(t.e, t.v) ? counts[static_cast<std::size_t>(t.n * 64 + t.e * 8 + t.z)] : 0;
  }
}

int FitnessTable::evaluate(const Chromosome& chromosome, int max_value) const {
  return max_value - static_cast<int>(simd::weighted_group_sum(chromosome.bits(), weights_));
}

std::vector<int> evaluate_population(const Population& population, const KnownsStore& knowns,
                                     const GaConfig& config, const Domain& domain) {
  const FitnessTable table(knowns, domain);
  const int max_value = max_fitness(config, domain);
  std::vector<int> out;
  out.reserve(population.members.size());
  for (const auto& m : population.members) {
    if (m.size() != static_cast<std::size_t>(config.chromosome_bits)) {
      throw Error(ErrorCode::malformed_chromosome, "member length does not match config");
    }
    out.push_back(table.evaluate(m, max_value));
  }
  return out;
}

}  // namespace kinetutor
