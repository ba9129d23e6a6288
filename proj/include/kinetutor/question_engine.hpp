#pragma once

#include <bitset>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kinetutor/domain.hpp"
#include "kinetutor/events.hpp"
#include "kinetutor/prompt.hpp"
#include "kinetutor/stores.hpp"
#include "kinetutor/task.hpp"

namespace kinetutor {

struct TupleOutcome {
  enum class Kind { rejected, answered, declined };

  Kind kind = Kind::rejected;
  int rule = 0;                       // rejection rule (1..3) when kind == rejected
  std::vector<KnownEntry> inserted;   // student fact, propagated copies, solved variables

  static TupleOutcome rejected_by(int rule) { return {Kind::rejected, rule, {}}; }
  static TupleOutcome declined() { return {Kind::declined, 0, {}}; }
};

/// What the student is ultimately after. Object and zone are bound by
/// confirmation prompts as the student names them.
struct Target {
  std::optional<VariableId> variable;
  std::optional<int> object;
  std::optional<int> zone;
};

/// Turns tuples into questions. Rejection rules, in order:
///   1. the (n, e, v, z) fact is already known (or was already asked this generation)
///   2. object n is unknown: ask for objects, then the stop-question; once the student
///      says there are no more objects, unknown n are rejected for the whole session
///   3. e or v out of range for the equation table
///   4. zone z unknown for object n: after the value, ask what the object was doing
///   5. accepted values are copied into every other equation holding the same variable
///   6. any (object, equation, zone) one short of fully known is solved for
class QuestionEngine {
 public:
  QuestionEngine(const Domain& domain, Stores& stores, EventLog& log, PromptChannel& channel);

  /// Sets the generation stamped on events and forgets which questions were asked.
  void begin_generation(int generation);
  int generation() const { return generation_; }

  /// Rejection that needs no dialog, or nullopt when process_tuple would ask something.
  std::optional<int> precheck(const QuadTuple& t) const;

  Task<TupleOutcome> process_tuple(QuadTuple t);

  /// Asks which quantity the problem wants until the answer names a known variable.
  Task<void> capture_target();

  Prompt render_caution(VariableId new_var, const KnownEntry& past, std::string_view candidate) const;

  /// Inserts every variable left as the single unknown of an (object, equation, zone),
  /// repeating until nothing changes.
  std::vector<KnownEntry> detect_solvable();

  /// Inserts an entry plus its shared-variable copies. Returns what was actually inserted.
  std::vector<KnownEntry> commit(KnownEntry entry, EventKind kind);

  /// Logs the question and the reply.
  Task<Answer> ask(Prompt prompt);
  void tell(Prompt message);

  Target& target() { return target_; }
  const Target& target() const { return target_; }
  bool target_solved() const;

  /// Running totals over the session.
  int elicited_responses() const { return elicited_; }
  int solved_insertions() const { return solved_; }
  /// Every answer accepted so far, in order. Replaying it reproduces the session.
  const std::vector<Answer>& transcript() const { return transcript_; }

  const Domain& domain() const { return domain_; }
  Stores& stores() { return stores_; }

 private:
  Task<void> confirm_target_object(int n);
  Task<void> confirm_target_zone(int n, int z);

  std::string describe_moment(VariableId var, int object, int zone) const;
  std::vector<const KnownEntry*> caution_pairs(int object, int zone, VariableId new_var) const;
  nlohmann::ordered_json known_payload(const KnownEntry& entry) const;

  const Domain& domain_;
  Stores& stores_;
  EventLog& log_;
  PromptChannel& channel_;
  int generation_ = 1;
  std::bitset<4096> asked_this_generation_;
  Target target_;
  std::set<std::pair<int, int>> declined_target_zones_;
  std::vector<Answer> transcript_;
  int elicited_ = 0;
  int solved_ = 0;
};

/// Blocking form: runs the dialog for one tuple against a StudentIo.
TupleOutcome process_tuple(QuestionEngine& engine, PromptChannel& channel, const QuadTuple& t, StudentIo& io);

/// Renders the object description the way it is quoted in prompts.
std::string bold(std::string_view student_text);

}  // namespace kinetutor
