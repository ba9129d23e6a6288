#include "kinetutor/genome.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>

#include "kinetutor/error.hpp"
#include "kinetutor/simd/kernels.hpp"

namespace kinetutor {

namespace {

std::vector<std::uint8_t> pack(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8);
  simd::pack_bits(bits, out);
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw Error(ErrorCode::parse_error, std::string("bad hex digit '") + c + "'");
}

Chromosome random_chromosome(std::size_t length, Rng& rng) {
  std::vector<std::uint8_t> bits(length);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) word = rng.next();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return Chromosome(std::move(bits));
}

}  // namespace

std::string_view to_string(GaMode mode) {
  return mode == GaMode::ga ? "ga" : "random-control";
}

GaMode ga_mode_from_string(std::string_view text) {
  if (text == "ga") return GaMode::ga;
  if (text == "random-control") return GaMode::random_control;
  throw Error(ErrorCode::invalid_config, "mode must be 'ga' or 'random-control', got '" +
                                             std::string(text) + "'");
}

void GaConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::invalid_config, why); };
  if (population_size < 2) fail("population_size must be at least 2");
  if (chromosome_bits <= 0 || chromosome_bits % kTupleBits != 0) {
    fail("chromosome_bits must be a positive multiple of 12");
  }
  if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
    fail("crossover_probability must lie in [0, 1]");
  }
  if (!(mutation_probability_per_bit >= 0.0 && mutation_probability_per_bit <= 1.0)) {
    fail("mutation_probability_per_bit must lie in [0, 1]");
  }
  if (max_generations < 0) fail("max_generations must be non-negative");
}

nlohmann::ordered_json to_json(const GaConfig& config) {
  nlohmann::ordered_json j;
  j["population_size"] = config.population_size;
  j["chromosome_bits"] = config.chromosome_bits;
  j["crossover_probability"] = config.crossover_probability;
  j["mutation_probability_per_bit"] = config.mutation_probability_per_bit;
  j["max_generations"] = config.max_generations;
  j["mode"] = std::string(to_string(config.mode));
  return j;
}

GaConfig ga_config_from_json(const nlohmann::json& node) {
  GaConfig config;
  if (node.is_null()) return config;
  if (!node.is_object()) throw Error(ErrorCode::invalid_config, "config must be an object");
  try {
    for (const auto& [key, value] : node.items()) {
      if (key == "population_size") config.population_size = value.get<int>();
      else if (key == "chromosome_bits") config.chromosome_bits = value.get<int>();
      else if (key == "crossover_probability") config.crossover_probability = value.get<double>();
      else if (key == "mutation_probability_per_bit") config.mutation_probability_per_bit = value.get<double>();
      else if (key == "max_generations") config.max_generations = value.get<int>();
      else if (key == "mode") config.mode = ga_mode_from_string(value.get<std::string>());
      else throw Error(ErrorCode::invalid_config, "unknown config field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, e.what());
  }
  return config;
}

Chromosome::Chromosome(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.size() % kTupleBits != 0) {
    throw Error(ErrorCode::malformed_chromosome,
                "length " + std::to_string(bits_.size()) + " is not a multiple of 12");
  }
  for (auto b : bits_) {
    if (b > 1) throw Error(ErrorCode::malformed_chromosome, "bits must be 0 or 1");
  }
}

Chromosome Chromosome::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c == '0' || c == '1') bits.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != ' ' && c != '.' && c != '|') {
      throw Error(ErrorCode::malformed_chromosome, std::string("unexpected character '") + c + "'");
    }
  }
  return Chromosome(std::move(bits));
}

Chromosome Chromosome::from_tuples(std::span<const QuadTuple> tuples) {
  std::vector<std::uint8_t> bits;
  bits.reserve(tuples.size() * kTupleBits);
  for (const auto& t : tuples) {
    if (t.n < 0 || t.n > kFieldMax || t.e < 0 || t.e > kFieldMax || t.v < 0 || t.v > kFieldMax ||
        t.z < 0 || t.z > kFieldMax) {
      throw Error(ErrorCode::index_out_of_range, "tuple field outside 0..7");
    }
    const auto code = t.code();
    for (int b = kTupleBits - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((code >> b) & 1));
  }
  return Chromosome(std::move(bits));
}

std::string Chromosome::to_string() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = static_cast<char>('0' + bits_[i]);
  return out;
}

nlohmann::ordered_json to_json(const Population& population) {
  nlohmann::ordered_json j;
  j["generation"] = population.generation;
  j["rng_seed"] = population.rng_seed;
  j["chromosome_bits"] = population.members.empty() ? 0 : population.members.front().size();
  auto members = nlohmann::ordered_json::array();
  for (const auto& m : population.members) members.push_back(to_hex(pack(m.bits())));
  j["members"] = std::move(members);
  return j;
}

Population population_from_json(const nlohmann::json& node) {
  try {
    Population population;
    population.generation = node.at("generation").get<int>();
    population.rng_seed = node.at("rng_seed").get<std::uint64_t>();
    const auto length = node.at("chromosome_bits").get<std::size_t>();
    for (const auto& hex : node.at("members")) {
      const auto text = hex.get<std::string>();
      if (text.size() != (length + 7) / 8 * 2) {
        throw Error(ErrorCode::parse_error, "member hex length does not match chromosome_bits");
      }
      std::vector<std::uint8_t> bits(length);
      for (std::size_t i = 0; i < length; ++i) {
        const int nibble = hex_value(text[i / 4]);
        bits[i] = static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1);
      }
      population.members.emplace_back(std::move(bits));
    }
    return population;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("population: ") + e.what());
  }
}

QuadTuple decode_tuple(const Chromosome& chromosome, std::size_t group_index) {
  if (group_index >= chromosome.tuple_count()) {
    throw Error(ErrorCode::index_out_of_range,
                "group " + std::to_string(group_index) + " of " + std::to_string(chromosome.tuple_count()));
  }
  const auto bits = chromosome.bits().subspan(group_index * kTupleBits, kTupleBits);
  auto field = [&](std::size_t at) { return (bits[at] << 2) | (bits[at + 1] << 1) | bits[at + 2]; };
  return {field(0), field(3), field(6), field(9)};
}

Population init_population(const GaConfig& config, Rng& rng) {
  config.validate();
  Population population;
  population.members.reserve(static_cast<std::size_t>(config.population_size));
  for (int i = 0; i < config.population_size; ++i) {
    population.members.push_back(random_chromosome(static_cast<std::size_t>(config.chromosome_bits), rng));
  }
  return population;
}

Population init_population(const GaConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  auto population = init_population(config, rng);
  population.rng_seed = seed;
  return population;
}

std::pair<std::size_t, std::size_t> roulette_select(const Population& population,
                                                    std::span<const int> fitness, Rng& rng) {
  if (population.members.empty()) throw Error(ErrorCode::empty_population, "nothing to select from");
  if (fitness.size() != population.members.size()) {
    throw Error(ErrorCode::fitness_length_mismatch, "one fitness value per member is required");
  }
  std::vector<double> cumulative(fitness.size());
  double total = 0.0;
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    total += 1.0 / static_cast<double>(std::max(fitness[i], 1));
    cumulative[i] = total;
  }
  auto spin = [&] {
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    return static_cast<std::size_t>(it - cumulative.begin());
  };
  const auto first = spin();
  const auto second = spin();
  return {first, second};
}

void swap_tail(std::span<std::uint8_t> a, std::span<std::uint8_t> b, std::size_t k) {
  if (a.size() != b.size()) throw Error(ErrorCode::length_mismatch, "crossover needs equal lengths");
  if (k > a.size()) throw Error(ErrorCode::index_out_of_range, "crossover point beyond length");
  std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(k), a.end(),
                   b.begin() + static_cast<std::ptrdiff_t>(k));
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t k) {
  if (a.size() != b.size()) throw Error(ErrorCode::length_mismatch, "crossover needs equal lengths");
  std::pair<Chromosome, Chromosome> out{a, b};
  swap_tail(out.first.bits_, out.second.bits_, k);
  return out;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                            double probability) {
  if (a.size() != b.size()) throw Error(ErrorCode::length_mismatch, "crossover needs equal lengths");
  if (!rng.bernoulli(probability)) return {a, b};
  const auto k = static_cast<std::size_t>(rng.below(a.size() + 1));
  return crossover_at(a, b, k);
}

Chromosome mutate(const Chromosome& c, Rng& rng, double probability_per_bit) {
  Chromosome out = c;
  for (auto& bit : out.bits_) {
    if (rng.bernoulli(probability_per_bit)) bit ^= 1u;
  }
  return out;
}

Population ga_step(const Population& population, std::span<const int> fitness, const GaConfig& config,
                   Rng& rng) {
  if (fitness.size() != population.members.size()) {
    throw Error(ErrorCode::fitness_length_mismatch,
                std::to_string(fitness.size()) + " fitness values for " +
                    std::to_string(population.members.size()) + " members");
  }
  if (population.members.empty()) throw Error(ErrorCode::empty_population, "cannot step an empty population");
  const std::size_t size = population.members.size();
  const std::size_t length = population.members.front().size();

  Population next;
  next.generation = population.generation + 1;
  next.rng_seed = population.rng_seed;
  next.members.reserve(size);

  if (config.mode == GaMode::random_control) {
    for (std::size_t i = 0; i < size; ++i) next.members.push_back(random_chromosome(length, rng));
    return next;
  }

  // Lowest (best) fitness first.
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return fitness[l] < fitness[r]; });
  Population sorted;
  std::vector<int> sorted_fitness;
  sorted.members.reserve(size);
  for (auto i : order) {
    sorted.members.push_back(population.members[i]);
    sorted_fitness.push_back(fitness[i]);
  }

  while (next.members.size() < size) {
    const auto [i, j] = roulette_select(sorted, sorted_fitness, rng);
    auto [first, second] = crossover(sorted.members[i], sorted.members[j], rng, config.crossover_probability);
    next.members.push_back(mutate(first, rng, config.mutation_probability_per_bit));
    auto child = mutate(second, rng, config.mutation_probability_per_bit);
    if (next.members.size() < size) next.members.push_back(std::move(child));
  }
  return next;
}

std::size_t export_bitstream(const Population& population, std::ostream& out) {
  std::vector<std::uint8_t> all;
  for (const auto& m : population.members) all.insert(all.end(), m.bits().begin(), m.bits().end());
  const auto bytes = pack(all);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io_failure, "bitstream write failed");
  return bytes.size();
}

std::size_t export_bitstream(const Population& population, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  const auto n = export_bitstream(population, out);
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "write to " + path.string() + " failed");
  return n;
}

}  // namespace kinetutor
