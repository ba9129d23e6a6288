#pragma once

#include <deque>
#include <string>
#include <vector>

#include "kinetutor/domain.hpp"
#include "kinetutor/prompt.hpp"
#include "kinetutor/scripted_student.hpp"

namespace testing {

inline std::string data_file(const std::string& name) { return std::string(KINETUTOR_DATA_DIR) + "/" + name; }

inline const kinetutor::ProblemScript& car_script() {
  static const kinetutor::ProblemScript script =
      kinetutor::load_script(data_file("car_problem.json"), kinetutor::Domain::kinematics());
  return script;
}

inline kinetutor::Answer text(std::string s) { return kinetutor::Answer{std::move(s), std::nullopt}; }
inline kinetutor::Answer yes() { return kinetutor::Answer{"yes", true}; }
inline kinetutor::Answer no() { return kinetutor::Answer{"no", false}; }

/// Replays canned answers in order and records every prompt and message shown.
class QueueIo : public kinetutor::StudentIo {
 public:
  explicit QueueIo(std::vector<kinetutor::Answer> answers = {}) : answers_(answers.begin(), answers.end()) {}

  void push(kinetutor::Answer a) { answers_.push_back(std::move(a)); }

  void present(const kinetutor::Prompt& prompt) override { shown.push_back(prompt); }
  kinetutor::Answer receive(const kinetutor::Prompt& prompt) override {
    asked.push_back(prompt);
    if (answers_.empty()) throw kinetutor::Error(kinetutor::ErrorCode::io_closed, "no more canned answers");
    auto a = std::move(answers_.front());
    answers_.pop_front();
    return a;
  }

  std::size_t remaining() const { return answers_.size(); }

  std::vector<kinetutor::Prompt> shown;
  std::vector<kinetutor::Prompt> asked;

 private:
  std::deque<kinetutor::Answer> answers_;
};

}  // namespace testing
