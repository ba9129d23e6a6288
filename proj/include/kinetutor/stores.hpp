#pragma once

#include <bitset>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "kinetutor/domain.hpp"

namespace kinetutor {

enum class Provenance { student, shared_propagation, solved_algebraically, zone_link };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

struct KnownEntry {
  int object = 0;
  int eqn = 0;
  int var = 0;  // position within equation eqn
  int zone = 0;
  std::string response;
  Provenance provenance = Provenance::student;

  QuadTuple key() const { return {object, eqn, var, zone}; }
  bool operator==(const KnownEntry&) const = default;
};

/// Objects the student named. Once closed, no further objects are accepted.
class ObjectRegistry {
 public:
  void add(int index, std::string description);
  void close() { closed_ = true; }

  bool closed() const { return closed_; }
  bool contains(int index) const { return entries_.count(index) != 0; }
  const std::string& description(int index) const;
  const std::map<int, std::string>& entries() const { return entries_; }

 private:
  std::map<int, std::string> entries_;
  bool closed_ = false;
};

struct ZoneInfo {
  std::string description;
  int object = 0;
};

/// Acceleration zones, keyed per object by the raw 3-bit zone value that first named them.
class ZoneRegistry {
 public:
  void add(int object, int zone, std::string description);

  bool contains(int object, int zone) const { return entries_.count({object, zone}) != 0; }
  const std::string& description(int object, int zone) const;
  std::vector<int> zones_of(int object) const;
  const std::map<std::pair<int, int>, ZoneInfo>& entries() const { return entries_; }

  /// Stored temporal order, present only while it is a permutation of the object's zones.
  std::optional<std::vector<int>> temporal_order(int object) const;
  void set_temporal_order(int object, std::vector<int> order);

  /// Link questions the student turned down: (object, from zone, to zone, link rule index).
  bool link_declined(int object, int from, int to, int rule) const;
  void decline_link(int object, int from, int to, int rule);

 private:
  std::map<std::pair<int, int>, ZoneInfo> entries_;
  std::map<int, std::vector<int>> order_;
  std::set<std::tuple<int, int, int, int>> declined_links_;
};

/// Insertion-ordered set of known (object, eqn, var, zone) facts.
class KnownsStore {
 public:
  /// Returns false and leaves the store unchanged when the key already exists.
  bool insert(KnownEntry entry);

  bool contains(const QuadTuple& key) const { return index_.test(key.code()); }
  bool contains_variable(const Domain& domain, int object, VariableId var, int zone) const;
  const KnownEntry* find(const QuadTuple& key) const;

  const std::vector<KnownEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<KnownEntry> entries_;
  std::bitset<4096> index_;
};

struct Stores {
  ObjectRegistry objects;
  ZoneRegistry zones;
  KnownsStore knowns;
};

nlohmann::ordered_json to_json(const KnownEntry& entry, const Domain& domain);
KnownEntry known_from_json(const nlohmann::json& node, const Domain& domain);

}  // namespace kinetutor
