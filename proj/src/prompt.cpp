#include "kinetutor/prompt.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace kinetutor {

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::new_object: return "new-object";
    case PromptKind::more_objects: return "more-objects";
    case PromptKind::know_variable: return "know-variable";
    case PromptKind::zone_description: return "zone-description";
    case PromptKind::caution_confirm: return "caution-confirm";
    case PromptKind::zone_order: return "zone-order";
    case PromptKind::zone_link: return "zone-link";
    case PromptKind::solve_advice: return "solve-advice";
    case PromptKind::info: return "info";
    case PromptKind::target: return "target";
    case PromptKind::target_confirm: return "target-confirm";
  }
  return "info";
}

std::string_view to_string(Expected expected) {
  switch (expected) {
    case Expected::free_text: return "free-text";
    case Expected::yes_no: return "yes-no";
    case Expected::ordering: return "ordering";
    case Expected::none: return "none";
  }
  return "none";
}

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  auto begin = std::find_if_not(text.begin(), text.end(), is_space);
  auto end = std::find_if_not(text.rbegin(), std::string_view::reverse_iterator(begin), is_space).base();
  return std::string(begin, end);
}

bool is_negative(std::string_view text) {
  std::string norm;
  for (char c : trim(text)) {
    if (c == '.' || c == '!') continue;
    norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  static constexpr std::array<std::string_view, 12> negatives = {
      "", "n", "no", "nope", "none", "unknown", "not known", "dont know", "don't know",
      "i don't know", "i dont know", "no idea"};
  return std::find(negatives.begin(), negatives.end(), norm) != negatives.end();
}

void validate_answer(const Prompt& prompt, const Answer& answer) {
  switch (prompt.expected) {
    case Expected::yes_no:
      if (!answer.affirmative) {
        throw Error(ErrorCode::answer_shape_mismatch, "a yes/no prompt needs 'affirmative'");
      }
      break;
    case Expected::free_text:
    case Expected::ordering:
      if (trim(answer.text).empty()) {
        throw Error(ErrorCode::answer_shape_mismatch, "this prompt needs a non-empty text answer");
      }
      break;
    case Expected::none:
      throw Error(ErrorCode::answer_shape_mismatch, "this message does not take an answer");
  }
}

nlohmann::ordered_json to_json(const Prompt& prompt, const Domain& domain) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(prompt.kind));
  j["text"] = prompt.text;
  j["expected"] = std::string(to_string(prompt.expected));
  nlohmann::ordered_json ctx = nlohmann::ordered_json::object();
  const auto& c = prompt.context;
  if (c.tuple) ctx["tuple"] = {c.tuple->n, c.tuple->e, c.tuple->v, c.tuple->z};
  if (c.object) ctx["object"] = *c.object;
  if (c.zone) ctx["zone"] = *c.zone;
  if (c.equation) ctx["equation"] = *c.equation;
  if (c.variable) ctx["variable"] = domain.variable(*c.variable).symbol;
  if (c.past_variable) ctx["past_variable"] = domain.variable(*c.past_variable).symbol;
  if (c.past_response) ctx["past_response"] = *c.past_response;
  if (c.candidate_response) ctx["candidate_response"] = *c.candidate_response;
  if (c.to_zone) ctx["to_zone"] = *c.to_zone;
  if (c.link_from) ctx["link_from"] = domain.variable(*c.link_from).symbol;
  if (!c.zones.empty()) ctx["zones"] = c.zones;
  if (c.target_stage) ctx["target_stage"] = *c.target_stage;
  j["context"] = std::move(ctx);
  return j;
}

nlohmann::ordered_json to_json(const Answer& answer) {
  nlohmann::ordered_json j;
  j["text"] = answer.text;
  if (answer.affirmative) j["affirmative"] = *answer.affirmative;
  return j;
}

Answer answer_from_json(const nlohmann::json& node) {
  if (!node.is_object()) throw Error(ErrorCode::answer_shape_mismatch, "answer must be a JSON object");
  Answer answer;
  if (node.contains("text")) {
    if (!node.at("text").is_string()) throw Error(ErrorCode::answer_shape_mismatch, "'text' must be a string");
    answer.text = node.at("text").get<std::string>();
  }
  if (node.contains("affirmative")) {
    if (!node.at("affirmative").is_boolean()) {
      throw Error(ErrorCode::answer_shape_mismatch, "'affirmative' must be a boolean");
    }
    answer.affirmative = node.at("affirmative").get<bool>();
    if (answer.text.empty()) answer.text = *answer.affirmative ? "yes" : "no";
  }
  return answer;
}

}  // namespace kinetutor
