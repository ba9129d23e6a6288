#include "kinetutor/events.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "kinetutor/error.hpp"

namespace kinetutor {

namespace {

constexpr EventKind kAllKinds[] = {
    EventKind::question, EventKind::answer,     EventKind::caution,   EventKind::known,
    EventKind::propagation, EventKind::solve,   EventKind::zone_order, EventKind::zone_link,
    EventKind::ga_step,  EventKind::fitness_snapshot,
};

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::question: return "question";
    case EventKind::answer: return "answer";
    case EventKind::caution: return "caution";
    case EventKind::known: return "known";
    case EventKind::propagation: return "propagation";
    case EventKind::solve: return "solve";
    case EventKind::zone_order: return "zone-order";
    case EventKind::zone_link: return "zone-link";
    case EventKind::ga_step: return "ga-step";
    case EventKind::fitness_snapshot: return "fitness-snapshot";
  }
  return "question";
}

EventKind event_kind_from_string(std::string_view text) {
  for (auto kind : kAllKinds) {
    if (to_string(kind) == text) return kind;
  }
  throw Error(ErrorCode::malformed_log, "unknown event kind '" + std::string(text) + "'");
}

const SessionEvent& EventLog::append(int generation, EventKind kind, nlohmann::ordered_json payload,
                                     std::optional<KnownEntry> known) {
  SessionEvent event;
  event.seq = events_.size();
  event.generation = generation;
  event.kind = kind;
  event.payload = payload.is_null() ? nlohmann::ordered_json::object() : std::move(payload);
  event.known = std::move(known);
  events_.push_back(std::move(event));
  return events_.back();
}

nlohmann::ordered_json to_json(const SessionEvent& event, const Domain& domain) {
  nlohmann::ordered_json j;
  j["seq"] = event.seq;
  j["generation"] = event.generation;
  j["kind"] = std::string(to_string(event.kind));
  j["payload"] = event.payload;
  if (event.known) j["known"] = to_json(*event.known, domain);
  return j;
}

SessionEvent event_from_json(const nlohmann::ordered_json& node, const Domain& domain) {
  try {
    SessionEvent event;
    event.seq = node.at("seq").get<std::uint64_t>();
    event.generation = node.at("generation").get<int>();
    event.kind = event_kind_from_string(node.at("kind").get<std::string>());
    event.payload = node.at("payload");
    if (node.contains("known")) event.known = known_from_json(nlohmann::json(node.at("known")), domain);
    return event;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_log, e.what());
  }
}

void write_jsonl(const std::vector<SessionEvent>& events, const Domain& domain, std::ostream& out) {
  for (const auto& e : events) out << to_json(e, domain).dump() << '\n';
}

std::vector<SessionEvent> read_jsonl(std::istream& in, const Domain& domain) {
  std::vector<SessionEvent> events;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(nlohmann::ordered_json::parse(line), domain));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::malformed_log, "line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return events;
}

KnownsStore replay_knowns(const std::vector<SessionEvent>& events) {
  KnownsStore store;
  for (const auto& e : events) {
    if (e.known && !store.insert(*e.known)) {
      throw Error(ErrorCode::malformed_log, "log inserts the same known twice");
    }
  }
  return store;
}

}  // namespace kinetutor
