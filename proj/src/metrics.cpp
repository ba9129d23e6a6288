#include "kinetutor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>

#include "kinetutor/error.hpp"
#include "kinetutor/prompt.hpp"

namespace kinetutor {

namespace {

bool elicited(const nlohmann::ordered_json& payload) {
  if (payload.contains("elicited")) return payload.at("elicited").get<bool>();
  if (payload.contains("affirmative")) return payload.at("affirmative").get<bool>();
  return payload.contains("text") && !is_negative(payload.at("text").get<std::string>());
}

std::string fixed3(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3f", value);
  return buffer;
}

ModeSummary summarize(const std::vector<RunMetrics>& runs, const char* label) {
  if (runs.empty()) throw Error(ErrorCode::invalid_config, std::string("no ") + label + " runs to compare");
  std::vector<int> solved;
  for (const auto& run : runs) {
    if (!run.solved_at) throw Error(ErrorCode::unsolved_run_present, std::string("a ") + label + " run never solved");
    solved.push_back(*run.solved_at);
  }
  std::sort(solved.begin(), solved.end());
  return ModeSummary{solved.size(), solved.front(), quantile(solved, 0.25), quantile(solved, 0.5),
                     quantile(solved, 0.75), solved.back()};
}

nlohmann::ordered_json to_json(const ModeSummary& s) {
  nlohmann::ordered_json j;
  j["runs"] = s.runs;
  j["min"] = s.min;
  j["q1"] = s.q1;
  j["median"] = s.median;
  j["q3"] = s.q3;
  j["max"] = s.max;
  return j;
}

}  // namespace

RunMetrics compute(const std::vector<SessionEvent>& events) {
  if (events.empty()) throw Error(ErrorCode::malformed_log, "the event log is empty");
  RunMetrics metrics;
  std::map<int, int> responses;

  for (const auto& e : events) {
    if (e.known) metrics.knowns_timeline.push_back({e.generation, *e.known});
    try {
      switch (e.kind) {
        case EventKind::answer:
          if (elicited(e.payload)) ++responses[e.generation];
          break;
        case EventKind::fitness_snapshot: {
          const int expected = static_cast<int>(metrics.per_generation.size()) + 1;
          if (e.generation != expected) {
            throw Error(ErrorCode::malformed_log, "fitness snapshot for generation " + std::to_string(e.generation) +
                                                      " where " + std::to_string(expected) + " was expected");
          }
          GenerationMetrics row;
          row.generation = e.generation;
          row.min_fitness = e.payload.at("min").get<int>();
          row.mean_fitness = e.payload.at("mean").get<double>();
          row.max_fitness = e.payload.at("max").get<int>();
          metrics.per_generation.push_back(row);
          if (e.payload.value("status", std::string()) == "solved") metrics.solved_at = e.generation;
          break;
        }
        default: break;
      }
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::malformed_log, "event " + std::to_string(e.seq) + ": " + ex.what());
    }
  }
  for (auto& row : metrics.per_generation) row.responses = responses[row.generation];
  return metrics;
}

double quantile(const std::vector<int>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Comparison compare(const std::vector<RunMetrics>& ga_runs, const std::vector<RunMetrics>& control_runs) {
  Comparison c;
  c.ga = summarize(ga_runs, "ga");
  c.control = summarize(control_runs, "random-control");
  c.ga_not_later = c.ga.median <= c.control.median;
  return c;
}

void write_csv(const RunMetrics& metrics, std::ostream& out) {
  out << "generation,responses,min_fitness,mean_fitness,max_fitness\n";
  for (const auto& row : metrics.per_generation) {
    out << row.generation << ',' << row.responses << ',' << row.min_fitness << ',' << fixed3(row.mean_fitness)
        << ',' << row.max_fitness << '\n';
  }
}

void write_timeline_jsonl(const RunMetrics& metrics, const Domain& domain, std::ostream& out) {
  for (const auto& entry : metrics.knowns_timeline) {
    nlohmann::ordered_json j;
    j["generation"] = entry.generation;
    j["object"] = entry.known.object;
    j["equation"] = entry.known.eqn;
    j["variable"] = domain.variable(domain.variable_at(entry.known.eqn, entry.known.var)).symbol;
    j["zone"] = entry.known.zone;
    j["response"] = entry.known.response;
    j["provenance"] = std::string(to_string(entry.known.provenance));
    out << j.dump() << '\n';
  }
}

void print_knowns_table(const RunMetrics& metrics, const Domain& domain, std::ostream& out) {
  out << std::left << std::setw(12) << "Generation" << std::setw(10) << "Equation" << std::setw(10) << "Variable"
      << std::setw(6) << "Zone" << std::setw(34) << "Response" << "Source\n";
  for (const auto& entry : metrics.knowns_timeline) {
    const auto& k = entry.known;
    out << std::setw(12) << entry.generation << std::setw(10) << k.eqn << std::setw(10)
        << domain.variable(domain.variable_at(k.eqn, k.var)).display << std::setw(6) << k.zone << std::setw(34)
        << k.response << to_string(k.provenance) << '\n';
  }
}

nlohmann::ordered_json to_json(const RunMetrics& metrics, const Domain& domain) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : metrics.per_generation) {
    nlohmann::ordered_json r;
    r["generation"] = row.generation;
    r["responses"] = row.responses;
    r["min_fitness"] = row.min_fitness;
    r["mean_fitness"] = row.mean_fitness;
    r["max_fitness"] = row.max_fitness;
    rows.push_back(std::move(r));
  }
  j["per_generation"] = std::move(rows);
  auto timeline = nlohmann::ordered_json::array();
  for (const auto& entry : metrics.knowns_timeline) {
    auto k = to_json(entry.known, domain);
    k["generation"] = entry.generation;
    timeline.push_back(std::move(k));
  }
  j["knowns_timeline"] = std::move(timeline);
  j["solved_at"] = metrics.solved_at ? nlohmann::ordered_json(*metrics.solved_at) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json to_json(const Comparison& comparison) {
  nlohmann::ordered_json j;
  j["ga"] = to_json(comparison.ga);
  j["random_control"] = to_json(comparison.control);
  j["ga_not_later"] = comparison.ga_not_later;
  return j;
}

}  // namespace kinetutor
