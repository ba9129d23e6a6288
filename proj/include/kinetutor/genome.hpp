#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kinetutor/domain.hpp"
#include "kinetutor/rng.hpp"

namespace kinetutor {

enum class GaMode { ga, random_control };

std::string_view to_string(GaMode mode);
GaMode ga_mode_from_string(std::string_view text);

struct GaConfig {
  int population_size = 50;
  int chromosome_bits = 12000;
  double crossover_probability = 0.25;
  double mutation_probability_per_bit = 0.01;
  int max_generations = 500;
  GaMode mode = GaMode::ga;

  /// Throws Error(invalid_config) when an invariant does not hold.
  void validate() const;
  int tuples_per_chromosome() const { return chromosome_bits / kTupleBits; }
};

nlohmann::ordered_json to_json(const GaConfig& config);
/// Missing fields keep their defaults.
GaConfig ga_config_from_json(const nlohmann::json& node);

/// Fixed-length bit string stored one bit per byte (values 0 or 1).
class Chromosome {
 public:
  explicit Chromosome(std::vector<std::uint8_t> bits);
  /// Parses '0'/'1' characters; spaces, dots and bars are ignored as separators.
  static Chromosome from_string(std::string_view text);
  static Chromosome from_tuples(std::span<const QuadTuple> tuples);

  std::size_t size() const { return bits_.size(); }
  std::size_t tuple_count() const { return bits_.size() / kTupleBits; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::string to_string() const;

  bool operator==(const Chromosome&) const = default;

 private:
  friend std::pair<Chromosome, Chromosome> crossover_at(const Chromosome&, const Chromosome&,
                                                         std::size_t);
  friend Chromosome mutate(const Chromosome&, Rng&, double);
  std::vector<std::uint8_t> bits_;
};

struct Population {
  std::vector<Chromosome> members;
  int generation = 1;
  std::uint64_t rng_seed = 0;

  bool operator==(const Population&) const = default;
};

/// Packed hex form (MSB first) for snapshots.
nlohmann::ordered_json to_json(const Population& population);
Population population_from_json(const nlohmann::json& node);

QuadTuple decode_tuple(const Chromosome& chromosome, std::size_t group_index);

Population init_population(const GaConfig& config, Rng& rng);
Population init_population(const GaConfig& config, std::uint64_t seed);

/// Two parent indices drawn with weight 1 / max(fitness, 1).
std::pair<std::size_t, std::size_t> roulette_select(const Population& population,
                                                    std::span<const int> fitness, Rng& rng);

/// Swaps every bit from index k (0 <= k <= length) to the end between two equal-length spans.
void swap_tail(std::span<std::uint8_t> a, std::span<std::uint8_t> b, std::size_t k);

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t k);
/// With the given probability picks k uniformly in [0, length] and swaps tails.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                            double probability);

Chromosome mutate(const Chromosome& c, Rng& rng, double probability_per_bit);

Population ga_step(const Population& population, std::span<const int> fitness,
                   const GaConfig& config, Rng& rng);

/// Concatenates every member and packs 8 bits per byte, MSB first, zero-padding the tail.
std::size_t export_bitstream(const Population& population, std::ostream& out);
std::size_t export_bitstream(const Population& population, const std::filesystem::path& path);

}  // namespace kinetutor
