#include "kinetutor/terminal_io.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <string>

namespace kinetutor {

std::optional<bool> parse_yes_no(std::string_view text) {
  std::string norm;
  for (char c : trim(text)) norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (norm == "y" || norm == "yes") return true;
  if (norm == "n" || norm == "no") return false;
  return std::nullopt;
}

void TerminalIo::present(const Prompt& prompt) {
  out_ << prompt.text;
  if (prompt.expected == Expected::yes_no) out_ << " (yes/no)";
  out_ << '\n';
  if (prompt.expected != Expected::none) out_ << "> ";
  out_.flush();
}

Answer TerminalIo::receive(const Prompt& prompt) {
  std::string line;
  for (;;) {
    if (!std::getline(in_, line)) throw Error(ErrorCode::io_closed, "end of input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (prompt.expected == Expected::yes_no) {
      if (auto yes = parse_yes_no(line)) return Answer{trim(line), yes};
      out_ << "Please answer yes or no.\n> ";
    } else if (!trim(line).empty()) {
      return Answer{trim(line), std::nullopt};
    } else {
      out_ << "> ";
    }
    out_.flush();
  }
}

}  // namespace kinetutor
