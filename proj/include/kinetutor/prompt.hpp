#pragma once

#include <coroutine>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kinetutor/domain.hpp"
#include "kinetutor/error.hpp"
#include "kinetutor/task.hpp"

namespace kinetutor {

enum class PromptKind {
  new_object,
  more_objects,
  know_variable,
  zone_description,
  caution_confirm,
  zone_order,
  zone_link,
  solve_advice,
  info,
  target,
  target_confirm,
};

enum class Expected { free_text, yes_no, ordering, none };

std::string_view to_string(PromptKind kind);
std::string_view to_string(Expected expected);

/// Everything the engine knew when it produced a prompt. Fields are filled per kind.
struct PromptContext {
  std::optional<QuadTuple> tuple;
  std::optional<int> object;
  std::optional<int> zone;
  std::optional<int> equation;
  std::optional<VariableId> variable;
  std::optional<VariableId> past_variable;       // caution-confirm
  std::optional<std::string> past_response;      // caution-confirm, verbatim
  std::optional<std::string> candidate_response; // caution-confirm: answer awaiting confirmation
  std::optional<int> to_zone;                    // zone-link
  std::optional<VariableId> link_from;           // zone-link
  std::vector<int> zones;                        // zone-order
  std::optional<std::string> target_stage;       // target / target-confirm: variable, object, zone
};

/// Student-supplied spans in text are wrapped in ** so front ends can render them bold.
struct Prompt {
  PromptKind kind = PromptKind::info;
  std::string text;
  Expected expected = Expected::none;
  PromptContext context;
};

struct Answer {
  std::string text;
  std::optional<bool> affirmative;  // required for yes-no prompts
};

/// Throws Error(answer_shape_mismatch) when the answer does not fit what the prompt expects.
void validate_answer(const Prompt& prompt, const Answer& answer);

/// "no", "unknown", "don't know" and friends, case-insensitive.
bool is_negative(std::string_view text);
std::string trim(std::string_view text);

nlohmann::ordered_json to_json(const Prompt& prompt, const Domain& domain);
nlohmann::ordered_json to_json(const Answer& answer);
Answer answer_from_json(const nlohmann::json& node);

/// The io contract every front end implements: show a prompt, and for prompts
/// that expect one, block until the student's answer is available.
/// receive() throws Error(io_closed) when the student has gone away.
class StudentIo {
 public:
  virtual ~StudentIo() = default;
  virtual void present(const Prompt& prompt) = 0;
  virtual Answer receive(const Prompt& prompt) = 0;
};

/// One outstanding question at a time between a suspended session and its driver.
class PromptChannel {
 public:
  struct AskAwaiter {
    PromptChannel& channel;

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept { channel.waiting_ = h; }
    Answer await_resume() {
      channel.pending_.reset();
      return std::move(*std::exchange(channel.answer_, std::nullopt));
    }
  };

  /// Publishes the prompt; co_await the result to suspend until resume() delivers the answer.
  AskAwaiter ask(Prompt prompt) {
    pending_ = std::move(prompt);
    return AskAwaiter{*this};
  }
  void notify(Prompt message) { outbox_.push_back(std::move(message)); }

  bool awaiting_answer() const { return waiting_ != nullptr; }
  const Prompt& pending() const { return *pending_; }

  /// Validates and delivers the answer, resuming the suspended session until its next question.
  void resume(Answer answer) {
    validate_answer(*pending_, answer);
    answer_ = std::move(answer);
    std::exchange(waiting_, nullptr).resume();
  }

  std::vector<Prompt> take_messages() { return std::exchange(outbox_, {}); }

  void reset() {
    pending_.reset();
    answer_.reset();
    waiting_ = nullptr;
    outbox_.clear();
  }

 private:
  std::optional<Prompt> pending_;
  std::optional<Answer> answer_;
  std::coroutine_handle<> waiting_;
  std::vector<Prompt> outbox_;
};

/// Runs a task to completion against a blocking StudentIo.
template <typename T>
T drive(Task<T> task, PromptChannel& channel, StudentIo& io) {
  auto flush = [&] {
    for (const auto& message : channel.take_messages()) io.present(message);
  };
  try {
    task.start();
    while (!task.done()) {
      if (!channel.awaiting_answer()) throw Error(ErrorCode::io_failure, "task suspended without a question");
      flush();
      const Prompt prompt = channel.pending();
      io.present(prompt);
      channel.resume(io.receive(prompt));
    }
  } catch (...) {
    // The suspended frames die with `task`; forget the handle that pointed into them.
    channel.reset();
    throw;
  }
  flush();
  return task.result();
}

}  // namespace kinetutor
