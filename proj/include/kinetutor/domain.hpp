#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kinetutor {

/// Index of a variable in the domain vocabulary (x, x0, v0x, dt, a, vx, t, t0 for kinematics).
struct VariableId {
  std::uint8_t index = 0;
  auto operator<=>(const VariableId&) const = default;
};

/// Where in a zone a variable sits; drives the "start of / end of / during" wording.
enum class Timing { start, end, during };

struct VariableInfo {
  std::string symbol;       // machine token, e.g. "v0x"
  std::string display;      // rendering used in relationship texts, e.g. "a_x"
  std::string description;  // student-facing, e.g. "initial velocity"
  Timing timing = Timing::during;
};

struct EquationSpec {
  int number = 0;
  std::string display;
  std::vector<VariableId> variables;  // position p (1-based) is variables[p - 1]

  int var_count() const { return static_cast<int>(variables.size()); }
};

/// Terminal quantity of one zone that carries into the initial quantity of the next.
struct ZoneLinkRule {
  VariableId from;
  VariableId to;
  std::string quantity;
};

/// Decoded (object, equation, variable, zone) unit; each field is a 3-bit value.
struct QuadTuple {
  int n = 0;
  int e = 0;
  int v = 0;
  int z = 0;

  auto operator<=>(const QuadTuple&) const = default;

  /// 12-bit code with n in the high bits, the same layout as a chromosome group.
  std::uint16_t code() const {
    return static_cast<std::uint16_t>((n << 9) | (e << 6) | (v << 3) | z);
  }
  static QuadTuple from_code(std::uint16_t code) {
    return {(code >> 9) & 7, (code >> 6) & 7, (code >> 3) & 7, code & 7};
  }
};

inline constexpr int kFieldMax = 7;
inline constexpr int kTupleBits = 12;

class InterrelationshipTable {
 public:
  void add(VariableId new_var, VariableId past_var, std::string text);
  /// Ordered lookup: (a, b) and (b, a) are distinct rows.
  const std::string& lookup(VariableId new_var, VariableId past_var) const;
  std::size_t size() const { return rows_.size(); }
  const std::map<std::pair<VariableId, VariableId>, std::string>& rows() const { return rows_; }

 private:
  std::map<std::pair<VariableId, VariableId>, std::string> rows_;
};

/// The equation table, variable vocabulary and relationship texts. Immutable once loaded.
class Domain {
 public:
  static Domain from_json(const nlohmann::json& doc);
  static Domain load(const std::filesystem::path& path);
  /// The kinematics domain compiled into the binary from data/kinematics_domain.json.
  static const Domain& kinematics();

  std::size_t variable_count() const { return variables_.size(); }
  const VariableInfo& variable(VariableId id) const;
  VariableId variable_id(std::string_view symbol) const;
  std::optional<VariableId> find_variable(std::string_view symbol) const;

  int equation_count() const { return static_cast<int>(equations_.size()); }
  const EquationSpec& equation(int number) const;
  const std::vector<EquationSpec>& equations() const { return equations_; }

  /// True when 1 <= e <= equation_count and 1 <= v <= var_count(e).
  bool is_valid(int e, int v) const noexcept;
  VariableId variable_at(int e, int position) const;
  int position_of(int e, VariableId var) const;
  std::optional<int> find_position(int e, VariableId var) const noexcept;

  /// Every other equation holding the same physical quantity.
  std::vector<int> shared_equations(VariableId var, int e) const;
  std::vector<int> equations_containing(VariableId var) const;

  const std::string& lookup_caution(VariableId new_var, VariableId past_var) const;
  const InterrelationshipTable& interrelationships() const { return relations_; }

  const std::vector<ZoneLinkRule>& zone_links() const { return links_; }

  int max_var_count() const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<VariableInfo> variables_;
  std::vector<EquationSpec> equations_;
  std::vector<ZoneLinkRule> links_;
  InterrelationshipTable relations_;
};

std::string_view to_string(Timing timing);

}  // namespace kinetutor
