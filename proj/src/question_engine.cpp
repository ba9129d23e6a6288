#include "kinetutor/question_engine.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <tuple>

namespace kinetutor {

namespace {

std::string lower(std::string_view text) {
  std::string out;
  for (char c : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string_view moment_filler(Timing timing) {
  switch (timing) {
    case Timing::start: return "at the start of the time";
    case Timing::end: return "at the end of the time";
    case Timing::during: return "during the time";
  }
  return "during the time";
}

}  // namespace

std::string bold(std::string_view student_text) {
  return "**" + std::string(student_text) + "**";
}

QuestionEngine::QuestionEngine(const Domain& domain, Stores& stores, EventLog& log, PromptChannel& channel)
    : domain_(domain), stores_(stores), log_(log), channel_(channel) {}

void QuestionEngine::begin_generation(int generation) {
  generation_ = generation;
  asked_this_generation_.reset();
}

std::optional<int> QuestionEngine::precheck(const QuadTuple& t) const {
  const bool valid = domain_.is_valid(t.e, t.v);
  if (valid && (stores_.knowns.contains(t) || asked_this_generation_.test(t.code()))) return 1;
  if (!stores_.objects.contains(t.n)) {
    if (stores_.objects.closed()) return 2;
    return std::nullopt;
  }
  if (!valid) return 3;
  return std::nullopt;
}

Task<Answer> QuestionEngine::ask(Prompt prompt) {
  log_.append(generation_, EventKind::question, to_json(prompt, domain_));
  const PromptKind kind = prompt.kind;
  Answer answer = co_await channel_.ask(std::move(prompt));
  transcript_.push_back(answer);

  EventKind event_kind = EventKind::answer;
  if (kind == PromptKind::caution_confirm) event_kind = EventKind::caution;
  else if (kind == PromptKind::zone_order) event_kind = EventKind::zone_order;
  else if (kind == PromptKind::zone_link) event_kind = EventKind::zone_link;

  nlohmann::ordered_json payload;
  payload["prompt"] = std::string(to_string(kind));
  payload["text"] = answer.text;
  if (answer.affirmative) payload["affirmative"] = *answer.affirmative;
  if (event_kind == EventKind::answer) {
    bool elicited = false;
    switch (kind) {
      case PromptKind::new_object:
      case PromptKind::know_variable:
      case PromptKind::zone_description: elicited = !is_negative(answer.text); break;
      case PromptKind::more_objects: elicited = answer.affirmative.value_or(false); break;
      default: break;
    }
    payload["elicited"] = elicited;
    if (elicited) ++elicited_;
  }
  log_.append(generation_, event_kind, std::move(payload));
  co_return answer;
}

void QuestionEngine::tell(Prompt message) {
  log_.append(generation_, EventKind::question, to_json(message, domain_));
  channel_.notify(std::move(message));
}

Task<TupleOutcome> QuestionEngine::process_tuple(QuadTuple t) {
  // Rule 1
  if (domain_.is_valid(t.e, t.v) &&
      (stores_.knowns.contains(t) || asked_this_generation_.test(t.code()))) {
    co_return TupleOutcome::rejected_by(1);
  }

  // Rule 2
  if (!stores_.objects.contains(t.n)) {
    if (stores_.objects.closed()) co_return TupleOutcome::rejected_by(2);
    PromptContext ctx;
    ctx.tuple = t;
    ctx.object = t.n;
    Prompt object_question{PromptKind::new_object, "Do you see any objects in the problem?",
                                       Expected::free_text, ctx};
    Answer named = co_await ask(std::move(object_question));
    if (is_negative(named.text)) {
      stores_.objects.close();
      co_return TupleOutcome::rejected_by(2);
    }
    stores_.objects.add(t.n, trim(named.text));
    if (stores_.objects.entries().size() == 2) {
      tell(Prompt{PromptKind::info,
                  "This problem has more than one object. Questions about objects meeting in space "
                  "or time are not supported; each object is worked on separately.",
                  Expected::none, {}});
    }
    co_await confirm_target_object(t.n);
    PromptContext more_ctx;
    more_ctx.object = t.n;
    Prompt stop_question{PromptKind::more_objects, "Do you see any more objects in this problem?",
                                      Expected::yes_no, more_ctx};
    Answer more = co_await ask(std::move(stop_question));
    if (!more.affirmative.value_or(false)) stores_.objects.close();
  }

  // Rule 3
  if (!domain_.is_valid(t.e, t.v)) co_return TupleOutcome::rejected_by(3);

  asked_this_generation_.set(t.code());
  const VariableId var = domain_.variable_at(t.e, t.v);
  const auto& info = domain_.variable(var);
  const std::string& object = stores_.objects.description(t.n);
  const bool zone_known = stores_.zones.contains(t.n, t.z);

  PromptContext ctx;
  ctx.tuple = t;
  ctx.object = t.n;
  ctx.zone = t.z;
  ctx.equation = t.e;
  ctx.variable = var;
  std::string question = "Do you know the " + info.description + " of " + bold(object);
  if (zone_known) question += " " + describe_moment(var, t.n, t.z);
  question += "?";
  Prompt know{PromptKind::know_variable, question, Expected::free_text, ctx};
  Answer value = co_await ask(std::move(know));
  if (is_negative(value.text)) co_return TupleOutcome::declined();
  const std::string response = trim(value.text);

  if (zone_known) {
    for (const KnownEntry* past : caution_pairs(t.n, t.z, var)) {
      Prompt caution = render_caution(var, *past, response);
      Answer confirmed = co_await ask(std::move(caution));
      if (!confirmed.affirmative.value_or(false)) co_return TupleOutcome::declined();
    }
  } else {
    // Rule 4
    Prompt zone_question{PromptKind::zone_description,
                                       "What was " + bold(object) + " doing when it had the " +
                                           info.description + " which you said was " + bold(response) + "?",
                                       Expected::free_text, ctx};
    Answer doing = co_await ask(std::move(zone_question));
    if (is_negative(doing.text)) co_return TupleOutcome::declined();
    stores_.zones.add(t.n, t.z, trim(doing.text));
    co_await confirm_target_zone(t.n, t.z);
  }

  // Rules 5 and 6
  TupleOutcome outcome;
  outcome.kind = TupleOutcome::Kind::answered;
  outcome.inserted = commit(KnownEntry{t.n, t.e, t.v, t.z, response, Provenance::student}, EventKind::known);
  auto solved = detect_solvable();
  outcome.inserted.insert(outcome.inserted.end(), solved.begin(), solved.end());
  co_return outcome;
}

Task<void> QuestionEngine::capture_target() {
  std::string menu;
  for (std::size_t i = 0; i < domain_.variable_count(); ++i) {
    const auto& v = domain_.variable(VariableId{static_cast<std::uint8_t>(i)});
    if (!menu.empty()) menu += ", ";
    menu += v.symbol + " (" + v.description + ")";
  }
  PromptContext ctx;
  ctx.target_stage = "variable";
  for (;;) {
    Prompt prompt{PromptKind::target,
                                   "What is the problem asking for? Name one quantity: " + menu + ".",
                                   Expected::free_text, ctx};
    Answer a = co_await ask(std::move(prompt));
    const std::string wanted = lower(trim(a.text));
    for (std::size_t i = 0; i < domain_.variable_count(); ++i) {
      const VariableId id{static_cast<std::uint8_t>(i)};
      const auto& v = domain_.variable(id);
      if (wanted == lower(v.symbol) || wanted == lower(v.display) || wanted == lower(v.description)) {
        target_.variable = id;
        co_return;
      }
    }
    tell(Prompt{PromptKind::info, "'" + trim(a.text) + "' is not one of the quantities listed.", Expected::none, {}});
  }
}

Task<void> QuestionEngine::confirm_target_object(int n) {
  if (!target_.variable || target_.object) co_return;
  PromptContext ctx;
  ctx.object = n;
  ctx.variable = target_.variable;
  ctx.target_stage = "object";
  Prompt prompt{PromptKind::target_confirm,
                                 "Is " + bold(stores_.objects.description(n)) + " the object whose " +
                                     domain_.variable(*target_.variable).description +
                                     " the problem asks for?",
                                 Expected::yes_no, ctx};
  Answer a = co_await ask(std::move(prompt));
  if (a.affirmative.value_or(false)) target_.object = n;
}

Task<void> QuestionEngine::confirm_target_zone(int n, int z) {
  if (!target_.variable || target_.object != n || target_.zone) co_return;
  if (declined_target_zones_.count({n, z})) co_return;
  PromptContext ctx;
  ctx.object = n;
  ctx.zone = z;
  ctx.variable = target_.variable;
  ctx.target_stage = "zone";
  Prompt prompt{PromptKind::target_confirm,
                                 "Does the problem ask for the " + domain_.variable(*target_.variable).description +
                                     " of " + bold(stores_.objects.description(n)) + " when it was " +
                                     bold(stores_.zones.description(n, z)) + "?",
                                 Expected::yes_no, ctx};
  Answer a = co_await ask(std::move(prompt));
  if (a.affirmative.value_or(false)) target_.zone = z;
  else declined_target_zones_.insert({n, z});
}

bool QuestionEngine::target_solved() const {
  if (!target_.variable || !target_.object || !target_.zone) return false;
  return stores_.knowns.contains_variable(domain_, *target_.object, *target_.variable, *target_.zone);
}

std::string QuestionEngine::describe_moment(VariableId var, int object, int zone) const {
  return std::string(moment_filler(domain_.variable(var).timing)) + " when it was " +
         bold(stores_.zones.description(object, zone));
}

std::vector<const KnownEntry*> QuestionEngine::caution_pairs(int object, int zone, VariableId new_var) const {
  std::vector<const KnownEntry*> out;
  std::vector<VariableId> seen;
  for (const auto& k : stores_.knowns.entries()) {
    if (k.object != object || k.zone != zone) continue;
    const VariableId past = domain_.variable_at(k.eqn, k.var);
    if (past == new_var || std::find(seen.begin(), seen.end(), past) != seen.end()) continue;
    seen.push_back(past);
    out.push_back(&k);
  }
  return out;
}

Prompt QuestionEngine::render_caution(VariableId new_var, const KnownEntry& past, std::string_view candidate) const {
  const VariableId past_var = domain_.variable_at(past.eqn, past.var);
  if (past_var == new_var) {
    throw Error(ErrorCode::same_variable, "a caution needs two different variables");
  }
  const std::string& object = stores_.objects.description(past.object);
  const std::string moment = describe_moment(new_var, past.object, past.zone);
  const std::string& relation = domain_.lookup_caution(new_var, past_var);

  PromptContext ctx;
  ctx.tuple = QuadTuple{past.object, 0, 0, past.zone};
  ctx.object = past.object;
  ctx.zone = past.zone;
  ctx.variable = new_var;
  ctx.past_variable = past_var;
  ctx.past_response = past.response;
  ctx.candidate_response = std::string(candidate);
  std::string text = "Do you know the " + domain_.variable(new_var).description + " of " + bold(object) + " " +
                     moment + "? Keep in mind that " + relation + ", which you said was " +
                     bold(past.response) + ". Is " + bold(candidate) + " still your answer?";
  return Prompt{PromptKind::caution_confirm, std::move(text), Expected::yes_no, std::move(ctx)};
}

nlohmann::ordered_json QuestionEngine::known_payload(const KnownEntry& entry) const {
  nlohmann::ordered_json payload;
  payload["symbol"] = domain_.variable(domain_.variable_at(entry.eqn, entry.var)).symbol;
  payload["provenance"] = std::string(to_string(entry.provenance));
  return payload;
}

std::vector<KnownEntry> QuestionEngine::commit(KnownEntry entry, EventKind kind) {
  std::vector<KnownEntry> out;
  if (!stores_.knowns.insert(entry)) return out;
  log_.append(generation_, kind, known_payload(entry), entry);
  out.push_back(entry);

  const VariableId var = domain_.variable_at(entry.eqn, entry.var);
  for (int e : domain_.shared_equations(var, entry.eqn)) {
    KnownEntry copy{entry.object, e, *domain_.find_position(e, var), entry.zone, entry.response,
                    Provenance::shared_propagation};
    if (stores_.knowns.insert(copy)) {
      log_.append(generation_, EventKind::propagation, known_payload(copy), copy);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

std::vector<KnownEntry> QuestionEngine::detect_solvable() {
  std::vector<KnownEntry> out;
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::tuple<int, int, int>, unsigned> known_positions;
    for (const auto& k : stores_.knowns.entries()) known_positions[{k.object, k.eqn, k.zone}] |= 1u << k.var;

    for (const auto& [key, mask] : known_positions) {
      const auto [n, e, z] = key;
      const auto& eq = domain_.equation(e);
      if (std::popcount(mask) != eq.var_count() - 1) continue;
      int missing = 1;
      while (mask & (1u << missing)) ++missing;

      const VariableId var = domain_.variable_at(e, missing);
      KnownEntry solved{n, e, missing, z,
                        "solved from equation " + std::to_string(e) + ", zone " + std::to_string(z),
                        Provenance::solved_algebraically};
      auto added = commit(solved, EventKind::solve);
      ++solved_;

      const std::string object = stores_.objects.contains(n) ? stores_.objects.description(n)
                                                             : "object " + std::to_string(n);
      const std::string zone = stores_.zones.contains(n, z) ? stores_.zones.description(n, z)
                                                           : "zone " + std::to_string(z);
      PromptContext ctx;
      ctx.object = n;
      ctx.zone = z;
      ctx.equation = e;
      ctx.variable = var;
      tell(Prompt{PromptKind::solve_advice,
                  "Every other quantity in equation " + std::to_string(e) + " (" + eq.display + ") is known for " +
                      bold(object) + " when it was " + bold(zone) + ". Solve for " +
                      domain_.variable(var).display + ", the " + domain_.variable(var).description + ".",
                  Expected::none, std::move(ctx)});

      out.insert(out.end(), added.begin(), added.end());
      changed = true;
      break;
    }
  }
  return out;
}

TupleOutcome process_tuple(QuestionEngine& engine, PromptChannel& channel, const QuadTuple& t, StudentIo& io) {
  return drive(engine.process_tuple(t), channel, io);
}

}  // namespace kinetutor
