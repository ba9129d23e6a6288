#include "kinetutor/error.hpp"

namespace kinetutor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_equation: return "invalid-equation";
    case ErrorCode::variable_not_in_equation: return "variable-not-in-equation";
    case ErrorCode::unknown_variable: return "unknown-variable";
    case ErrorCode::same_variable: return "same-variable";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::empty_population: return "empty-population";
    case ErrorCode::fitness_length_mismatch: return "fitness-length-mismatch";
    case ErrorCode::malformed_chromosome: return "malformed-chromosome";
    case ErrorCode::duplicate_known: return "duplicate-known";
    case ErrorCode::registry_closed: return "registry-closed";
    case ErrorCode::unknown_object: return "unknown-object";
    case ErrorCode::unknown_zone: return "unknown-zone";
    case ErrorCode::io_closed: return "io-closed";
    case ErrorCode::io_failure: return "io-failure";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::schema_violation: return "schema-violation";
    case ErrorCode::unanswerable_prompt: return "unanswerable-prompt";
    case ErrorCode::answer_shape_mismatch: return "answer-shape-mismatch";
    case ErrorCode::malformed_log: return "malformed-log";
    case ErrorCode::unsolved_run_present: return "unsolved-run-present";
  }
  return "unknown-error";
}

}  // namespace kinetutor
