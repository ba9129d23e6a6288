#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kinetutor/domain.hpp"
#include "kinetutor/prompt.hpp"

namespace kinetutor {

struct ScriptZone {
  std::string description;
  std::map<VariableId, std::string> facts;
};

struct ScriptObject {
  std::string description;
  std::vector<ScriptZone> zones;    // in temporal order
  std::vector<bool> link_consents;  // one per adjacent zone pair
};

struct ScriptTarget {
  int object = 0;
  VariableId variable;
  int zone = 0;
};

struct ProblemScript {
  std::string statement;
  std::vector<ScriptObject> objects;
  ScriptTarget target;
};

/// Throws Error(parse_error) with the line number for malformed JSON, and
/// Error(schema_violation) for well-formed documents that break the schema.
ProblemScript parse_script(std::string_view text, const Domain& domain);
ProblemScript load_script(const std::filesystem::path& path, const Domain& domain);

/// Answers engine prompts from a ProblemScript. Engine object and zone indices are
/// bound to script entries as the dialog names them.
class ScriptedStudent : public StudentIo {
 public:
  ScriptedStudent(ProblemScript script, const Domain& domain);

  void present(const Prompt& prompt) override;
  Answer receive(const Prompt& prompt) override;

  /// Pure with respect to the dialog so far. Throws Error(unanswerable_prompt).
  Answer answer(const Prompt& prompt);

  std::size_t prompts_seen() const { return prompts_seen_; }
  const ProblemScript& script() const { return script_; }

 private:
  int script_object(const PromptContext& ctx, const Prompt& prompt) const;
  std::optional<int> script_zone(int engine_object, int engine_zone) const;
  Answer know_variable(const Prompt& prompt);

  ProblemScript script_;
  const Domain& domain_;
  std::size_t revealed_ = 0;
  std::map<int, int> object_binding_;                 // engine n -> script object
  std::map<std::pair<int, int>, int> zone_binding_;   // engine (n, z) -> script zone
  std::optional<std::tuple<int, int, int>> pending_zone_;  // (n, z, script zone) awaiting its description
  std::size_t prompts_seen_ = 0;
};

}  // namespace kinetutor
