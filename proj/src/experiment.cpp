#include "kinetutor/experiment.hpp"

namespace kinetutor {

ScriptedRun run_scripted(const Domain& domain, const ProblemScript& script, const SessionOptions& options) {
  TutorSession session(domain, options);
  ScriptedStudent student(script, domain);
  ScriptedRun run;
  run.status = run_session(session, student);
  run.solved_at = session.solved_at();
  run.events = session.events();
  run.stores = session.stores();
  run.snapshot = snapshot(session);
  return run;
}

}  // namespace kinetutor
