#pragma once

#include <optional>
#include <vector>

#include "kinetutor/domain.hpp"
#include "kinetutor/events.hpp"
#include "kinetutor/genome.hpp"
#include "kinetutor/scripted_student.hpp"
#include "kinetutor/session.hpp"

namespace kinetutor {

struct ScriptedRun {
  SessionStatus status = SessionStatus::running;
  std::optional<int> solved_at;
  std::vector<SessionEvent> events;
  Stores stores;
  SessionSnapshot snapshot;
};

/// One unattended session of `script` under `options`.
ScriptedRun run_scripted(const Domain& domain, const ProblemScript& script, const SessionOptions& options);

}  // namespace kinetutor
