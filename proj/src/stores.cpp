#include "kinetutor/stores.hpp"

#include <algorithm>

#include "kinetutor/error.hpp"

namespace kinetutor {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::student: return "student";
    case Provenance::shared_propagation: return "shared-propagation";
    case Provenance::solved_algebraically: return "solved-algebraically";
    case Provenance::zone_link: return "zone-link";
  }
  return "student";
}

Provenance provenance_from_string(std::string_view text) {
  for (auto p : {Provenance::student, Provenance::shared_propagation,
                 Provenance::solved_algebraically, Provenance::zone_link}) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::parse_error, "unknown provenance '" + std::string(text) + "'");
}

void ObjectRegistry::add(int index, std::string description) {
  if (closed_) throw Error(ErrorCode::registry_closed, "object registry is closed");
  if (index < 0 || index > kFieldMax) {
    throw Error(ErrorCode::index_out_of_range, "object index " + std::to_string(index));
  }
  if (description.empty()) throw Error(ErrorCode::schema_violation, "empty object description");
  if (!entries_.emplace(index, std::move(description)).second) {
    throw Error(ErrorCode::schema_violation, "object " + std::to_string(index) + " already registered");
  }
}

const std::string& ObjectRegistry::description(int index) const {
  auto it = entries_.find(index);
  if (it == entries_.end()) {
    throw Error(ErrorCode::unknown_object, "object " + std::to_string(index));
  }
  return it->second;
}

void ZoneRegistry::add(int object, int zone, std::string description) {
  if (zone < 0 || zone > kFieldMax) {
    throw Error(ErrorCode::index_out_of_range, "zone index " + std::to_string(zone));
  }
  if (description.empty()) throw Error(ErrorCode::schema_violation, "empty zone description");
  if (!entries_.emplace(std::pair{object, zone}, ZoneInfo{std::move(description), object}).second) {
    throw Error(ErrorCode::schema_violation, "zone " + std::to_string(zone) + " already registered");
  }
  // A new zone invalidates any stored ordering for this object.
  order_.erase(object);
}

const std::string& ZoneRegistry::description(int object, int zone) const {
  auto it = entries_.find({object, zone});
  if (it == entries_.end()) {
    throw Error(ErrorCode::unknown_zone,
                "zone " + std::to_string(zone) + " of object " + std::to_string(object));
  }
  return it->second.description;
}

std::vector<int> ZoneRegistry::zones_of(int object) const {
  std::vector<int> out;
  for (const auto& [key, info] : entries_) {
    if (key.first == object) out.push_back(key.second);
  }
  return out;
}

std::optional<std::vector<int>> ZoneRegistry::temporal_order(int object) const {
  auto it = order_.find(object);
  if (it == order_.end()) return std::nullopt;
  return it->second;
}

void ZoneRegistry::set_temporal_order(int object, std::vector<int> order) {
  auto expected = zones_of(object);
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != expected) {
    throw Error(ErrorCode::schema_violation, "zone order must be a permutation of the object's zones");
  }
  order_[object] = std::move(order);
}

bool ZoneRegistry::link_declined(int object, int from, int to, int rule) const {
  return declined_links_.count({object, from, to, rule}) != 0;
}

void ZoneRegistry::decline_link(int object, int from, int to, int rule) {
  declined_links_.insert({object, from, to, rule});
}

bool KnownsStore::insert(KnownEntry entry) {
  const auto key = entry.key();
  if (key.n < 0 || key.n > kFieldMax || key.e < 0 || key.e > kFieldMax || key.v < 0 ||
      key.v > kFieldMax || key.z < 0 || key.z > kFieldMax) {
    throw Error(ErrorCode::index_out_of_range, "known entry field outside 0..7");
  }
  if (index_.test(key.code())) return false;
  index_.set(key.code());
  entries_.push_back(std::move(entry));
  return true;
}

bool KnownsStore::contains_variable(const Domain& domain, int object, VariableId var, int zone) const {
  for (int e : domain.equations_containing(var)) {
    if (contains({object, e, *domain.find_position(e, var), zone})) return true;
  }
  return false;
}

const KnownEntry* KnownsStore::find(const QuadTuple& key) const {
  if (!contains(key)) return nullptr;
  for (const auto& entry : entries_) {
    if (entry.key() == key) return &entry;
  }
  return nullptr;
}

nlohmann::ordered_json to_json(const KnownEntry& entry, const Domain& domain) {
  nlohmann::ordered_json j;
  j["object"] = entry.object;
  j["eqn"] = entry.eqn;
  j["var"] = entry.var;
  j["symbol"] = domain.variable(domain.variable_at(entry.eqn, entry.var)).symbol;
  j["zone"] = entry.zone;
  j["response"] = entry.response;
  j["provenance"] = std::string(to_string(entry.provenance));
  return j;
}

KnownEntry known_from_json(const nlohmann::json& node, const Domain& domain) {
  try {
    KnownEntry entry;
    entry.object = node.at("object").get<int>();
    entry.eqn = node.at("eqn").get<int>();
    entry.var = node.at("var").get<int>();
    entry.zone = node.at("zone").get<int>();
    entry.response = node.at("response").get<std::string>();
    entry.provenance = provenance_from_string(node.at("provenance").get<std::string>());
    if (!domain.is_valid(entry.eqn, entry.var)) {
      throw Error(ErrorCode::schema_violation, "known entry references an invalid (eqn, var)");
    }
    return entry;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("known entry: ") + e.what());
  }
}

}  // namespace kinetutor
