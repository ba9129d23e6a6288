#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "kinetutor/prompt.hpp"

namespace kinetutor {

/// Line-oriented StudentIo: prompts go to `out`, one answer per line from `in`.
class TerminalIo : public StudentIo {
 public:
  TerminalIo(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  void present(const Prompt& prompt) override;
  /// Re-reads until the line fits the prompt. Throws Error(io_closed) at end of input.
  Answer receive(const Prompt& prompt) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// "yes"/"y"/"no"/"n" in any case; nullopt for anything else.
std::optional<bool> parse_yes_no(std::string_view text);

}  // namespace kinetutor
