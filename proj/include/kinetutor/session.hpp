#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "kinetutor/domain.hpp"
#include "kinetutor/events.hpp"
#include "kinetutor/genome.hpp"
#include "kinetutor/prompt.hpp"
#include "kinetutor/question_engine.hpp"
#include "kinetutor/rng.hpp"
#include "kinetutor/stores.hpp"
#include "kinetutor/task.hpp"

namespace kinetutor {

enum class SessionStatus { running, solved, exhausted, aborted };

std::string_view to_string(SessionStatus status);
SessionStatus session_status_from_string(std::string_view text);

struct GenerationResult {
  bool productive = false;
  int responses = 0;  // answers that gave the engine something
  int solved = 0;     // variables solved algebraically during the generation
};

struct SessionOptions {
  GaConfig config;
  std::uint64_t seed = 1;
  bool capture_target = true;  // without a target the session can only end exhausted or aborted
};

nlohmann::ordered_json to_json(const SessionOptions& options);
SessionOptions session_options_from_json(const nlohmann::json& node);

/// One tutoring session: GA population, stores, event log and the suspended
/// dialog. Drive it either with run_session() against a blocking StudentIo, or
/// turn by turn with start() / submit().
class TutorSession {
 public:
  TutorSession(const Domain& domain, SessionOptions options);
  TutorSession(const TutorSession&) = delete;
  TutorSession& operator=(const TutorSession&) = delete;

  /// Runs until the first question (or to the end when nothing is asked).
  void start();
  bool started() const { return root_.valid(); }
  bool awaiting_answer() const { return channel_.awaiting_answer(); }
  const Prompt& pending_prompt() const { return channel_.pending(); }
  /// Delivers an answer and runs to the next question or a terminal status.
  /// Throws Error(answer_shape_mismatch) without advancing when the answer does not fit.
  void submit(Answer answer);
  /// Messages (info, solve advice) produced since the last call.
  std::vector<Prompt> take_messages() { return channel_.take_messages(); }
  /// Ends a running session; the suspended dialog is dropped.
  void abort();

  Task<SessionStatus> run();
  Task<GenerationResult> run_generation();
  /// Zone ordering and linking. Returns the knowns it added.
  Task<std::vector<KnownEntry>> organizational_phase();

  SessionStatus status() const { return status_; }
  std::optional<int> solved_at() const { return solved_at_; }
  int generation() const { return population_.generation; }
  const Population& population() const { return population_; }
  const Stores& stores() const { return stores_; }
  Stores& stores() { return stores_; }
  const std::vector<SessionEvent>& events() const { return log_.events(); }
  const Target& target() const { return engine_.target(); }
  const std::vector<Answer>& transcript() const { return engine_.transcript(); }
  const SessionOptions& options() const { return options_; }
  const Domain& domain() const { return domain_; }
  QuestionEngine& engine() { return engine_; }
  PromptChannel& channel() { return channel_; }

 private:
  void settle();
  const KnownEntry* find_known(int object, VariableId var, int zone) const;
  Task<void> ask_zone_order(int object);

  const Domain& domain_;
  SessionOptions options_;
  Rng rng_;
  Population population_;
  Stores stores_;
  EventLog log_;
  PromptChannel channel_;
  QuestionEngine engine_;
  Task<SessionStatus> root_;
  SessionStatus status_ = SessionStatus::running;
  std::optional<int> solved_at_;
};

/// Blocking drivers. io-closed ends the session as aborted instead of propagating.
SessionStatus run_session(TutorSession& session, StudentIo& io);
GenerationResult run_generation(TutorSession& session, StudentIo& io);
std::vector<KnownEntry> organizational_phase(TutorSession& session, StudentIo& io);

/// A session is fully determined by its options and the answers it received, so
/// a snapshot stores those plus the population as a replay check.
struct SessionSnapshot {
  SessionOptions options;
  std::vector<Answer> answers;
  Population population;
  SessionStatus status = SessionStatus::running;
};

SessionSnapshot snapshot(const TutorSession& session);
nlohmann::ordered_json to_json(const SessionSnapshot& snapshot);
SessionSnapshot snapshot_from_json(const nlohmann::json& node);
SessionSnapshot load_snapshot(const std::filesystem::path& path);
void save_snapshot(const SessionSnapshot& snapshot, const std::filesystem::path& path);

/// Replays the answers into a fresh session. Throws Error(schema_violation) if the
/// replay diverges from the recorded population or status.
std::unique_ptr<TutorSession> restore_session(const Domain& domain, const SessionSnapshot& snapshot);

}  // namespace kinetutor
