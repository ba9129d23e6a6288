#include "kinetutor/session.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "kinetutor/fitness.hpp"

namespace kinetutor {

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::running: return "running";
    case SessionStatus::solved: return "solved";
    case SessionStatus::exhausted: return "exhausted";
    case SessionStatus::aborted: return "aborted";
  }
  return "running";
}

SessionStatus session_status_from_string(std::string_view text) {
  for (auto s : {SessionStatus::running, SessionStatus::solved, SessionStatus::exhausted, SessionStatus::aborted}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::parse_error, "unknown session status '" + std::string(text) + "'");
}

nlohmann::ordered_json to_json(const SessionOptions& options) {
  nlohmann::ordered_json j;
  j["config"] = to_json(options.config);
  j["seed"] = options.seed;
  j["capture_target"] = options.capture_target;
  return j;
}

SessionOptions session_options_from_json(const nlohmann::json& node) {
  SessionOptions options;
  try {
    if (node.contains("config")) options.config = ga_config_from_json(node.at("config"));
    if (node.contains("seed")) options.seed = node.at("seed").get<std::uint64_t>();
    if (node.contains("capture_target")) options.capture_target = node.at("capture_target").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return options;
}

TutorSession::TutorSession(const Domain& domain, SessionOptions options)
    : domain_(domain),
      options_(std::move(options)),
      rng_(options_.seed),
      population_(init_population(options_.config, rng_)),
      engine_(domain_, stores_, log_, channel_) {
  population_.rng_seed = options_.seed;
}

void TutorSession::start() {
  if (root_.valid()) return;
  root_ = run();
  root_.start();
  settle();
}

void TutorSession::submit(Answer answer) {
  if (!channel_.awaiting_answer()) throw Error(ErrorCode::io_failure, "no question is pending");
  channel_.resume(std::move(answer));
  settle();
}

void TutorSession::settle() {
  if (!root_.done()) return;
  try {
    status_ = root_.result();
  } catch (...) {
    status_ = SessionStatus::aborted;
    channel_.reset();
    throw;
  }
}

void TutorSession::abort() {
  if (status_ != SessionStatus::running) return;
  status_ = SessionStatus::aborted;
  root_ = Task<SessionStatus>();
  channel_.reset();
}

Task<SessionStatus> TutorSession::run() {
  const GaConfig& config = options_.config;
  if (config.max_generations <= 0) {
    status_ = SessionStatus::exhausted;
    co_return status_;
  }
  engine_.begin_generation(population_.generation);
  if (options_.capture_target) co_await engine_.capture_target();

  for (;;) {
    const int g = population_.generation;
    const GenerationResult result = co_await run_generation();
    if (!engine_.target_solved() && !result.productive) co_await organizational_phase();

    const auto scores = evaluate_population(population_, stores_.knowns, config, domain_);
    if (engine_.target_solved()) {
      status_ = SessionStatus::solved;
      solved_at_ = g;
    } else if (g >= config.max_generations) {
      status_ = SessionStatus::exhausted;
    }

    nlohmann::ordered_json snap;
    snap["min"] = *std::min_element(scores.begin(), scores.end());
    snap["mean"] = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    snap["max"] = *std::max_element(scores.begin(), scores.end());
    snap["responses"] = result.responses;
    snap["solved"] = result.solved;
    snap["knowns"] = stores_.knowns.size();
    snap["status"] = std::string(to_string(status_));
    log_.append(g, EventKind::fitness_snapshot, std::move(snap));
    if (status_ != SessionStatus::running) co_return status_;

    population_ = ga_step(population_, scores, config, rng_);
    nlohmann::ordered_json step;
    step["mode"] = std::string(to_string(config.mode));
    step["next_generation"] = population_.generation;
    log_.append(g, EventKind::ga_step, std::move(step));
  }
}

Task<GenerationResult> TutorSession::run_generation() {
  engine_.begin_generation(population_.generation);
  const int responses_before = engine_.elicited_responses();
  const int solved_before = engine_.solved_insertions();

  for (const auto& member : population_.members) {
    for (std::size_t i = 0; i < member.tuple_count() && !engine_.target_solved(); ++i) {
      const QuadTuple t = decode_tuple(member, i);
      if (engine_.precheck(t)) continue;
      co_await engine_.process_tuple(t);
    }
  }

  GenerationResult result;
  result.responses = engine_.elicited_responses() - responses_before;
  result.solved = engine_.solved_insertions() - solved_before;
  result.productive = result.responses > 0 || result.solved > 0;
  co_return result;
}

const KnownEntry* TutorSession::find_known(int object, VariableId var, int zone) const {
  for (const auto& k : stores_.knowns.entries()) {
    if (k.object == object && k.zone == zone && domain_.variable_at(k.eqn, k.var) == var) return &k;
  }
  return nullptr;
}

Task<void> TutorSession::ask_zone_order(int object) {
  const std::vector<int> zones = stores_.zones.zones_of(object);
  std::string listing;
  for (int z : zones) listing += "\n  " + std::to_string(z) + ": " + bold(stores_.zones.description(object, z));
  PromptContext ctx;
  ctx.object = object;
  ctx.zones = zones;
  const std::string text = "In what order did these happen to " + bold(stores_.objects.description(object)) +
                           "? Give the numbers, earliest first." + listing;
  for (;;) {
    Prompt prompt{PromptKind::zone_order, text, Expected::ordering, ctx};
    Answer a = co_await engine_.ask(std::move(prompt));
    std::string cleaned = a.text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::vector<int> order;
    std::string token;
    bool numeric = true;
    while (in >> token) {
      try {
        std::size_t used = 0;
        order.push_back(std::stoi(token, &used));
        numeric = numeric && used == token.size();
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (numeric && sorted == zones) {
      stores_.zones.set_temporal_order(object, order);
      co_return;
    }
    engine_.tell(Prompt{PromptKind::info, "Please list each of the zone numbers exactly once.", Expected::none, {}});
  }
}

Task<std::vector<KnownEntry>> TutorSession::organizational_phase() {
  std::vector<KnownEntry> added;
  std::vector<int> objects;
  for (const auto& [n, description] : stores_.objects.entries()) objects.push_back(n);

  for (int n : objects) {
    if (stores_.zones.zones_of(n).size() < 2) continue;
    if (!stores_.zones.temporal_order(n)) co_await ask_zone_order(n);
    const std::vector<int> order = *stores_.zones.temporal_order(n);
    const std::string& object = stores_.objects.description(n);

    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const int from = order[k];
      const int to = order[k + 1];
      const auto& rules = domain_.zone_links();
      for (std::size_t r = 0; r < rules.size(); ++r) {
        const ZoneLinkRule& rule = rules[r];
        const int rule_index = static_cast<int>(r);
        if (!stores_.knowns.contains_variable(domain_, n, rule.from, from)) continue;
        if (stores_.knowns.contains_variable(domain_, n, rule.to, to)) continue;
        if (stores_.zones.link_declined(n, from, to, rule_index)) continue;

        PromptContext ctx;
        ctx.object = n;
        ctx.zone = from;
        ctx.to_zone = to;
        ctx.link_from = rule.from;
        ctx.variable = rule.to;
        Prompt prompt{
            PromptKind::zone_link,
            "Is the " + rule.quantity + " of " + bold(object) + " at the end of the time when it was " +
                bold(stores_.zones.description(n, from)) + " the same as at the start of the time when it was " +
                bold(stores_.zones.description(n, to)) + "?",
            Expected::yes_no, ctx};
        Answer a = co_await engine_.ask(std::move(prompt));
        if (!a.affirmative.value_or(false)) {
          stores_.zones.decline_link(n, from, to, rule_index);
          continue;
        }

        const KnownEntry* source = find_known(n, rule.from, from);
        int eqn = source->eqn;
        if (!domain_.find_position(eqn, rule.to)) eqn = domain_.equations_containing(rule.to).front();
        KnownEntry link{n, eqn, domain_.position_of(eqn, rule.to), to,
                        "← " + domain_.variable(rule.from).display + " from zone " + std::to_string(from),
                        Provenance::zone_link};
        auto inserted = engine_.commit(std::move(link), EventKind::zone_link);
        added.insert(added.end(), inserted.begin(), inserted.end());
      }
    }
  }

  auto solved = engine_.detect_solvable();
  added.insert(added.end(), solved.begin(), solved.end());
  co_return added;
}

namespace {

template <typename T>
T drive_or_abort(TutorSession& session, Task<T> task, StudentIo& io) {
  try {
    return drive(std::move(task), session.channel(), io);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io_closed) session.abort();
    throw;
  }
}

}  // namespace

SessionStatus run_session(TutorSession& session, StudentIo& io) {
  try {
    return drive_or_abort(session, session.run(), io);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io_closed) return session.status();
    throw;
  }
}

GenerationResult run_generation(TutorSession& session, StudentIo& io) {
  return drive_or_abort(session, session.run_generation(), io);
}

std::vector<KnownEntry> organizational_phase(TutorSession& session, StudentIo& io) {
  return drive_or_abort(session, session.organizational_phase(), io);
}

SessionSnapshot snapshot(const TutorSession& session) {
  return SessionSnapshot{session.options(), session.transcript(), session.population(), session.status()};
}

nlohmann::ordered_json to_json(const SessionSnapshot& snapshot) {
  nlohmann::ordered_json j;
  j["options"] = to_json(snapshot.options);
  auto answers = nlohmann::ordered_json::array();
  for (const auto& a : snapshot.answers) answers.push_back(to_json(a));
  j["answers"] = std::move(answers);
  j["status"] = std::string(to_string(snapshot.status));
  j["population"] = to_json(snapshot.population);
  return j;
}

SessionSnapshot snapshot_from_json(const nlohmann::json& node) {
  SessionSnapshot snap;
  try {
    snap.options = session_options_from_json(node.at("options"));
    for (const auto& a : node.at("answers")) snap.answers.push_back(answer_from_json(a));
    snap.status = session_status_from_string(node.at("status").get<std::string>());
    snap.population = population_from_json(node.at("population"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return snap;
}

SessionSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
  return snapshot_from_json(doc);
}

void save_snapshot(const SessionSnapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  out << to_json(snapshot).dump() << '\n';
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

std::unique_ptr<TutorSession> restore_session(const Domain& domain, const SessionSnapshot& snap) {
  auto session = std::make_unique<TutorSession>(domain, snap.options);
  session->start();
  for (const auto& answer : snap.answers) {
    if (!session->awaiting_answer()) {
      throw Error(ErrorCode::schema_violation, "snapshot holds more answers than the session asked for");
    }
    try {
      session->submit(answer);
    } catch (const Error& e) {
      throw Error(ErrorCode::schema_violation, std::string("snapshot answer does not fit the replayed session: ") + e.what());
    }
  }
  session->take_messages();
  if (snap.status == SessionStatus::aborted) session->abort();
  if (session->status() != snap.status || !(session->population() == snap.population)) {
    throw Error(ErrorCode::schema_violation, "replaying the snapshot did not reproduce its recorded state");
  }
  return session;
}

}  // namespace kinetutor
