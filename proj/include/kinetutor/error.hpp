#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kinetutor {

enum class ErrorCode {
  invalid_equation,
  variable_not_in_equation,
  unknown_variable,
  same_variable,
  index_out_of_range,
  invalid_config,
  length_mismatch,
  empty_population,
  fitness_length_mismatch,
  malformed_chromosome,
  duplicate_known,
  registry_closed,
  unknown_object,
  unknown_zone,
  io_closed,
  io_failure,
  parse_error,
  schema_violation,
  unanswerable_prompt,
  answer_shape_mismatch,
  malformed_log,
  unsolved_run_present,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the engine carries one of the codes above so that
/// the CLI and the HTTP service can map it onto exit codes and status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kinetutor
