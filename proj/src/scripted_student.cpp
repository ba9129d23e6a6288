#include "kinetutor/scripted_student.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kinetutor/error.hpp"

namespace kinetutor {

namespace {

Answer yes_no(bool value) { return Answer{value ? "yes" : "no", value}; }

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

[[noreturn]] void violation(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::schema_violation, where + ": " + what);
}

std::string require_string(const nlohmann::json& node, const char* key, const std::string& where) {
  if (!node.contains(key)) violation(where, std::string("missing field '") + key + "'");
  if (!node.at(key).is_string()) violation(where + "." + key, "expected a string");
  return node.at(key).get<std::string>();
}

int require_int(const nlohmann::json& node, const char* key, const std::string& where) {
  if (!node.contains(key)) violation(where, std::string("missing field '") + key + "'");
  if (!node.at(key).is_number_integer()) violation(where + "." + key, "expected an integer");
  return node.at(key).get<int>();
}

}  // namespace

ProblemScript parse_script(std::string_view text, const Domain& domain) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) violation("$", "expected an object");

  ProblemScript script;
  if (doc.contains("statement")) script.statement = require_string(doc, "statement", "$");
  if (!doc.contains("objects") || !doc.at("objects").is_array() || doc.at("objects").empty()) {
    violation("$.objects", "expected a non-empty array");
  }

  const auto& objects = doc.at("objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string where = "$.objects[" + std::to_string(i) + "]";
    const auto& node = objects[i];
    if (!node.is_object()) violation(where, "expected an object");
    ScriptObject object;
    object.description = require_string(node, "description", where);
    if (!node.contains("zones") || !node.at("zones").is_array() || node.at("zones").empty()) {
      violation(where + ".zones", "expected a non-empty array");
    }
    const auto& zones = node.at("zones");
    if (zones.size() > kFieldMax + 1) violation(where + ".zones", "at most 8 zones per object");
    for (std::size_t z = 0; z < zones.size(); ++z) {
      const std::string zwhere = where + ".zones[" + std::to_string(z) + "]";
      ScriptZone zone;
      zone.description = require_string(zones[z], "description", zwhere);
      if (zones[z].contains("facts")) {
        const auto& facts = zones[z].at("facts");
        if (!facts.is_object()) violation(zwhere + ".facts", "expected an object");
        for (const auto& [symbol, value] : facts.items()) {
          const auto var = domain.find_variable(symbol);
          if (!var) violation(zwhere + ".facts", "unknown variable '" + symbol + "'");
          if (!value.is_string()) violation(zwhere + ".facts." + symbol, "expected a string");
          zone.facts[*var] = value.get<std::string>();
        }
      }
      object.zones.push_back(std::move(zone));
    }
    if (node.contains("link_consents")) {
      const auto& consents = node.at("link_consents");
      if (!consents.is_array()) violation(where + ".link_consents", "expected an array");
      for (const auto& c : consents) {
        if (!c.is_boolean()) violation(where + ".link_consents", "expected booleans");
        object.link_consents.push_back(c.get<bool>());
      }
    }
    if (object.link_consents.size() > object.zones.size() - 1) {
      violation(where + ".link_consents", "more entries than adjacent zone pairs");
    }
    object.link_consents.resize(object.zones.size() - 1, true);
    script.objects.push_back(std::move(object));
  }
  if (script.objects.size() > kFieldMax + 1) violation("$.objects", "at most 8 objects");

  if (!doc.contains("target") || !doc.at("target").is_object()) violation("$.target", "expected an object");
  const auto& target = doc.at("target");
  script.target.object = require_int(target, "object", "$.target");
  if (script.target.object < 0 || script.target.object >= static_cast<int>(script.objects.size())) {
    violation("$.target.object", "no object " + std::to_string(script.target.object));
  }
  const std::string symbol = require_string(target, "variable", "$.target");
  const auto var = domain.find_variable(symbol);
  if (!var) violation("$.target.variable", "unknown variable '" + symbol + "'");
  script.target.variable = *var;
  script.target.zone = require_int(target, "zone", "$.target");
  const auto& owner = script.objects[static_cast<std::size_t>(script.target.object)];
  if (script.target.zone < 0 || script.target.zone >= static_cast<int>(owner.zones.size())) {
    violation("$.target.zone", "no zone " + std::to_string(script.target.zone));
  }
  return script;
}

ProblemScript load_script(const std::filesystem::path& path, const Domain& domain) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_script(text.str(), domain);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

ScriptedStudent::ScriptedStudent(ProblemScript script, const Domain& domain)
    : script_(std::move(script)), domain_(domain) {}

void ScriptedStudent::present(const Prompt&) { ++prompts_seen_; }

Answer ScriptedStudent::receive(const Prompt& prompt) { return answer(prompt); }

int ScriptedStudent::script_object(const PromptContext& ctx, const Prompt& prompt) const {
  if (!ctx.object) throw Error(ErrorCode::unanswerable_prompt, "prompt names no object: " + prompt.text);
  auto it = object_binding_.find(*ctx.object);
  if (it == object_binding_.end()) {
    throw Error(ErrorCode::unanswerable_prompt, "object " + std::to_string(*ctx.object) + " was never introduced");
  }
  return it->second;
}

std::optional<int> ScriptedStudent::script_zone(int engine_object, int engine_zone) const {
  auto it = zone_binding_.find({engine_object, engine_zone});
  if (it == zone_binding_.end()) return std::nullopt;
  return it->second;
}

Answer ScriptedStudent::know_variable(const Prompt& prompt) {
  const auto& ctx = prompt.context;
  if (!ctx.zone || !ctx.variable) throw Error(ErrorCode::unanswerable_prompt, "incomplete question: " + prompt.text);
  const auto& object = script_.objects[static_cast<std::size_t>(script_object(ctx, prompt))];
  const int n = *ctx.object;

  if (auto bound = script_zone(n, *ctx.zone)) {
    const auto& facts = object.zones[static_cast<std::size_t>(*bound)].facts;
    auto it = facts.find(*ctx.variable);
    return Answer{it == facts.end() ? "no" : it->second, std::nullopt};
  }

  for (std::size_t sz = 0; sz < object.zones.size(); ++sz) {
    const bool taken = std::any_of(zone_binding_.begin(), zone_binding_.end(), [&](const auto& entry) {
      return entry.first.first == n && entry.second == static_cast<int>(sz);
    });
    if (taken) continue;
    auto it = object.zones[sz].facts.find(*ctx.variable);
    if (it == object.zones[sz].facts.end()) continue;
    pending_zone_ = std::tuple{n, *ctx.zone, static_cast<int>(sz)};
    return Answer{it->second, std::nullopt};
  }
  return Answer{"no", std::nullopt};
}

Answer ScriptedStudent::answer(const Prompt& prompt) {
  const auto& ctx = prompt.context;
  switch (prompt.kind) {
    case PromptKind::target:
      return Answer{domain_.variable(script_.target.variable).symbol, std::nullopt};

    case PromptKind::target_confirm: {
      const bool object_matches = script_object(ctx, prompt) == script_.target.object;
      if (ctx.target_stage == "object") return yes_no(object_matches);
      if (!ctx.zone) throw Error(ErrorCode::unanswerable_prompt, "zone confirmation without a zone");
      return yes_no(object_matches && script_zone(*ctx.object, *ctx.zone) == script_.target.zone);
    }

    case PromptKind::new_object: {
      if (!ctx.object) throw Error(ErrorCode::unanswerable_prompt, "new-object prompt without an index");
      if (revealed_ >= script_.objects.size()) return Answer{"no", std::nullopt};
      object_binding_[*ctx.object] = static_cast<int>(revealed_);
      return Answer{script_.objects[revealed_++].description, std::nullopt};
    }

    case PromptKind::more_objects:
      return yes_no(revealed_ < script_.objects.size());

    case PromptKind::know_variable:
      return know_variable(prompt);

    case PromptKind::zone_description: {
      if (!pending_zone_ || !ctx.object || !ctx.zone || std::get<0>(*pending_zone_) != *ctx.object ||
          std::get<1>(*pending_zone_) != *ctx.zone) {
        throw Error(ErrorCode::unanswerable_prompt, "zone question without a matching fact: " + prompt.text);
      }
      const int sz = std::get<2>(*pending_zone_);
      pending_zone_.reset();
      zone_binding_[{*ctx.object, *ctx.zone}] = sz;
      const auto& object = script_.objects[static_cast<std::size_t>(script_object(ctx, prompt))];
      return Answer{object.zones[static_cast<std::size_t>(sz)].description, std::nullopt};
    }

    case PromptKind::caution_confirm: {
      if (!ctx.zone || !ctx.variable || !ctx.past_variable || !ctx.past_response || !ctx.candidate_response) {
        throw Error(ErrorCode::unanswerable_prompt, "incomplete caution: " + prompt.text);
      }
      const auto& object = script_.objects[static_cast<std::size_t>(script_object(ctx, prompt))];
      const auto bound = script_zone(*ctx.object, *ctx.zone);
      if (!bound) return yes_no(false);
      const auto& facts = object.zones[static_cast<std::size_t>(*bound)].facts;
      auto fresh = facts.find(*ctx.variable);
      auto past = facts.find(*ctx.past_variable);
      const bool candidate_ok = fresh != facts.end() && fresh->second == *ctx.candidate_response;
      const bool past_ok = past == facts.end() || past->second == *ctx.past_response;
      return yes_no(candidate_ok && past_ok);
    }

    case PromptKind::zone_order: {
      script_object(ctx, prompt);
      std::vector<std::pair<int, int>> ranked;
      for (int z : ctx.zones) {
        const auto bound = script_zone(*ctx.object, z);
        if (!bound) throw Error(ErrorCode::unanswerable_prompt, "zone " + std::to_string(z) + " is not bound");
        ranked.emplace_back(*bound, z);
      }
      std::sort(ranked.begin(), ranked.end());
      std::string text;
      for (const auto& [rank, z] : ranked) text += (text.empty() ? "" : " ") + std::to_string(z);
      return Answer{text, std::nullopt};
    }

    case PromptKind::zone_link: {
      if (!ctx.zone || !ctx.to_zone) throw Error(ErrorCode::unanswerable_prompt, "link question without zones");
      const auto& object = script_.objects[static_cast<std::size_t>(script_object(ctx, prompt))];
      const auto from = script_zone(*ctx.object, *ctx.zone);
      const auto to = script_zone(*ctx.object, *ctx.to_zone);
      const bool adjacent = from && to && *to == *from + 1;
      return yes_no(adjacent && object.link_consents[static_cast<std::size_t>(*from)]);
    }

    case PromptKind::solve_advice:
    case PromptKind::info:
      break;
  }
  throw Error(ErrorCode::unanswerable_prompt, "no answer expected for: " + prompt.text);
}

}  // namespace kinetutor
