#include "kinetutor/domain.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "kinetutor/error.hpp"

namespace kinetutor {

// Generated at configure time from data/kinematics_domain.json.
extern const char* const kBundledDomainJson;

namespace {

Timing parse_timing(const std::string& text) {
  if (text == "start") return Timing::start;
  if (text == "end") return Timing::end;
  if (text == "during") return Timing::during;
  throw Error(ErrorCode::schema_violation, "unknown timing '" + text + "'");
}

const nlohmann::json& require(const nlohmann::json& node, const char* key) {
  if (!node.is_object() || !node.contains(key)) {
    throw Error(ErrorCode::schema_violation, std::string("missing field '") + key + "'");
  }
  return node.at(key);
}

std::string require_text(const nlohmann::json& node, const char* key) {
  const auto& value = require(node, key);
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw Error(ErrorCode::schema_violation, std::string("field '") + key + "' must be a non-empty string");
  }
  return value.get<std::string>();
}

}  // namespace

std::string_view to_string(Timing timing) {
  switch (timing) {
    case Timing::start: return "start";
    case Timing::end: return "end";
    case Timing::during: return "during";
  }
  return "during";
}

void InterrelationshipTable::add(VariableId new_var, VariableId past_var, std::string text) {
  if (new_var == past_var) {
    throw Error(ErrorCode::same_variable, "interrelationship rows need two distinct variables");
  }
  if (text.empty()) {
    throw Error(ErrorCode::schema_violation, "interrelationship text must be non-empty");
  }
  if (!rows_.emplace(std::pair{new_var, past_var}, std::move(text)).second) {
    throw Error(ErrorCode::schema_violation, "duplicate interrelationship row");
  }
}

const std::string& InterrelationshipTable::lookup(VariableId new_var, VariableId past_var) const {
  if (new_var == past_var) {
    throw Error(ErrorCode::same_variable, "no relationship between a variable and itself");
  }
  auto it = rows_.find({new_var, past_var});
  if (it == rows_.end()) {
    throw Error(ErrorCode::unknown_variable, "no interrelationship row for the requested pair");
  }
  return it->second;
}

Domain Domain::from_json(const nlohmann::json& doc) {
  Domain domain;
  domain.name_ = doc.is_object() && doc.contains("name") ? doc.at("name").get<std::string>() : "";

  const auto& vars = require(doc, "variables");
  if (!vars.is_array() || vars.empty() || vars.size() > 255) {
    throw Error(ErrorCode::schema_violation, "'variables' must be a non-empty array");
  }
  for (const auto& node : vars) {
    VariableInfo info;
    info.symbol = require_text(node, "symbol");
    info.display = node.contains("display") ? require_text(node, "display") : info.symbol;
    info.description = require_text(node, "description");
    info.timing = parse_timing(require_text(node, "timing"));
    if (domain.find_variable(info.symbol)) {
      throw Error(ErrorCode::schema_violation, "duplicate variable symbol '" + info.symbol + "'");
    }
    domain.variables_.push_back(std::move(info));
  }

  const auto& eqns = require(doc, "equations");
  if (!eqns.is_array() || eqns.empty() || eqns.size() > kFieldMax) {
    throw Error(ErrorCode::schema_violation, "'equations' must hold 1..7 entries");
  }
  int expected_number = 1;
  for (const auto& node : eqns) {
    EquationSpec eq;
    eq.number = require(node, "number").get<int>();
    if (eq.number != expected_number++) {
      throw Error(ErrorCode::schema_violation, "equations must be numbered 1..N in order");
    }
    eq.display = require_text(node, "display");
    const auto& list = require(node, "variables");
    if (!list.is_array() || list.empty() || list.size() > kFieldMax) {
      throw Error(ErrorCode::schema_violation, "each equation holds 1..7 variables");
    }
    std::set<VariableId> seen;
    for (const auto& symbol : list) {
      auto id = domain.variable_id(symbol.get<std::string>());
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::schema_violation, "variable repeated within an equation");
      }
      eq.variables.push_back(id);
    }
    domain.equations_.push_back(std::move(eq));
  }

  if (doc.contains("zone_links")) {
    for (const auto& node : doc.at("zone_links")) {
      ZoneLinkRule rule{domain.variable_id(require_text(node, "from")),
                        domain.variable_id(require_text(node, "to")),
                        require_text(node, "quantity")};
      domain.links_.push_back(std::move(rule));
    }
  }

  for (const auto& node : require(doc, "interrelationships")) {
    domain.relations_.add(domain.variable_id(require_text(node, "new")),
                          domain.variable_id(require_text(node, "past")),
                          require_text(node, "text"));
  }
  const auto n = domain.variables_.size();
  if (domain.relations_.size() != n * (n - 1)) {
    throw Error(ErrorCode::schema_violation,
                "interrelationships must cover every ordered pair of distinct variables (" +
                    std::to_string(n * (n - 1)) + " rows), found " +
                    std::to_string(domain.relations_.size()));
  }
  return domain;
}

Domain Domain::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io_failure, "cannot open domain file " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
  return from_json(doc);
}

const Domain& Domain::kinematics() {
  static const Domain domain = from_json(nlohmann::json::parse(kBundledDomainJson));
  return domain;
}

const VariableInfo& Domain::variable(VariableId id) const {
  if (id.index >= variables_.size()) {
    throw Error(ErrorCode::unknown_variable, "variable index " + std::to_string(id.index));
  }
  return variables_[id.index];
}

std::optional<VariableId> Domain::find_variable(std::string_view symbol) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].symbol == symbol) return VariableId{static_cast<std::uint8_t>(i)};
  }
  return std::nullopt;
}

VariableId Domain::variable_id(std::string_view symbol) const {
  if (auto id = find_variable(symbol)) return *id;
  throw Error(ErrorCode::unknown_variable, "unknown variable '" + std::string(symbol) + "'");
}

const EquationSpec& Domain::equation(int number) const {
  if (number < 1 || number > equation_count()) {
    throw Error(ErrorCode::invalid_equation, "equation " + std::to_string(number));
  }
  return equations_[static_cast<std::size_t>(number - 1)];
}

bool Domain::is_valid(int e, int v) const noexcept {
  if (e < 1 || e > equation_count()) return false;
  return v >= 1 && v <= equations_[static_cast<std::size_t>(e - 1)].var_count();
}

VariableId Domain::variable_at(int e, int position) const {
  const auto& eq = equation(e);
  if (position < 1 || position > eq.var_count()) {
    throw Error(ErrorCode::index_out_of_range,
                "equation " + std::to_string(e) + " has no position " + std::to_string(position));
  }
  return eq.variables[static_cast<std::size_t>(position - 1)];
}

std::optional<int> Domain::find_position(int e, VariableId var) const noexcept {
  if (e < 1 || e > equation_count()) return std::nullopt;
  const auto& vars = equations_[static_cast<std::size_t>(e - 1)].variables;
  auto it = std::find(vars.begin(), vars.end(), var);
  if (it == vars.end()) return std::nullopt;
  return static_cast<int>(it - vars.begin()) + 1;
}

int Domain::position_of(int e, VariableId var) const {
  equation(e);
  if (auto pos = find_position(e, var)) return *pos;
  throw Error(ErrorCode::variable_not_in_equation,
              variable(var).symbol + " is not in equation " + std::to_string(e));
}

std::vector<int> Domain::shared_equations(VariableId var, int e) const {
  position_of(e, var);
  std::vector<int> out;
  for (const auto& eq : equations_) {
    if (eq.number != e && find_position(eq.number, var)) out.push_back(eq.number);
  }
  return out;
}

std::vector<int> Domain::equations_containing(VariableId var) const {
  std::vector<int> out;
  for (const auto& eq : equations_) {
    if (find_position(eq.number, var)) out.push_back(eq.number);
  }
  return out;
}

const std::string& Domain::lookup_caution(VariableId new_var, VariableId past_var) const {
  return relations_.lookup(new_var, past_var);
}

int Domain::max_var_count() const {
  int best = 0;
  for (const auto& eq : equations_) best = std::max(best, eq.var_count());
  return best;
}

}  // namespace kinetutor
