#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kinetutor/domain.hpp"
#include "kinetutor/stores.hpp"

namespace kinetutor {

enum class EventKind {
  question,          // any prompt shown to the student, messages included
  answer,            // reply to new-object / more-objects / know-variable / zone-description / target prompts
  caution,           // reply to a caution-confirm prompt
  known,             // a student-supplied fact entered the knowns store
  propagation,       // shared-variable copy entered the store
  solve,             // algebraically solvable variable entered the store
  zone_order,        // temporal order stored
  zone_link,         // reply to a link prompt, or a linked fact entering the store
  ga_step,
  fitness_snapshot,  // exactly one per completed generation
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view text);

struct SessionEvent {
  std::uint64_t seq = 0;  // logical timestamp; wall-clock time would break byte-identical replays
  int generation = 0;
  EventKind kind = EventKind::question;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  std::optional<KnownEntry> known;  // set on every event that inserted into the knowns store
};

/// Append-only session log; folding the entries that carry `known` rebuilds the knowns store.
class EventLog {
 public:
  const SessionEvent& append(int generation, EventKind kind, nlohmann::ordered_json payload = {},
                             std::optional<KnownEntry> known = std::nullopt);

  const std::vector<SessionEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<SessionEvent> events_;
};

nlohmann::ordered_json to_json(const SessionEvent& event, const Domain& domain);
SessionEvent event_from_json(const nlohmann::ordered_json& node, const Domain& domain);

void write_jsonl(const std::vector<SessionEvent>& events, const Domain& domain, std::ostream& out);
std::vector<SessionEvent> read_jsonl(std::istream& in, const Domain& domain);

/// Rebuilds the knowns store from the log alone.
KnownsStore replay_knowns(const std::vector<SessionEvent>& events);

}  // namespace kinetutor
