#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinetutor/domain.hpp"
#include "kinetutor/events.hpp"
#include "kinetutor/stores.hpp"

namespace kinetutor {

struct GenerationMetrics {
  int generation = 0;
  int responses = 0;
  int min_fitness = 0;
  double mean_fitness = 0.0;
  int max_fitness = 0;
};

struct TimelineEntry {
  int generation = 0;
  KnownEntry known;
};

struct RunMetrics {
  std::vector<GenerationMetrics> per_generation;  // generations 1..N, one per fitness snapshot
  std::vector<TimelineEntry> knowns_timeline;     // log insertion order
  std::optional<int> solved_at;
};

/// Folds a session log. Throws Error(malformed_log) for an empty log or a gap in generations.
RunMetrics compute(const std::vector<SessionEvent>& events);

struct ModeSummary {
  std::size_t runs = 0;
  int min = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  int max = 0;
};

struct Comparison {
  ModeSummary ga;
  ModeSummary control;
  bool ga_not_later = false;  // median(ga) <= median(control)
};

/// Quantile with linear interpolation between order statistics (R type 7). `sorted` must be non-empty.
double quantile(const std::vector<int>& sorted, double p);

/// Throws Error(unsolved_run_present) if any run lacks solved_at, Error(invalid_config) on an empty list.
Comparison compare(const std::vector<RunMetrics>& ga_runs, const std::vector<RunMetrics>& control_runs);

/// generation,responses,min_fitness,mean_fitness,max_fitness with the mean at three decimals.
void write_csv(const RunMetrics& metrics, std::ostream& out);
void write_timeline_jsonl(const RunMetrics& metrics, const Domain& domain, std::ostream& out);
void print_knowns_table(const RunMetrics& metrics, const Domain& domain, std::ostream& out);

nlohmann::ordered_json to_json(const RunMetrics& metrics, const Domain& domain);
nlohmann::ordered_json to_json(const Comparison& comparison);

}  // namespace kinetutor
