#include "kinetutor/service.hpp"

#include <random>

#include <httplib.h>

#include "kinetutor/error.hpp"
#include "kinetutor/metrics.hpp"

namespace kinetutor {

namespace {

using Reply = TutorService::Reply;

Reply error_reply(int status, std::string_view code, const std::string& message) {
  nlohmann::ordered_json body;
  body["error"] = std::string(code);
  body["message"] = message;
  return {status, std::move(body)};
}

Reply not_found(const std::string& id) { return error_reply(404, "not-found", "no session '" + id + "'"); }

std::optional<nlohmann::json> parse_body(const std::string& body, Reply& failure) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    failure = error_reply(400, "parse-error", e.what());
    return std::nullopt;
  }
}

nlohmann::ordered_json prompt_or_null(const TutorSession& session) {
  if (!session.awaiting_answer()) return nullptr;
  return to_json(session.pending_prompt(), session.domain());
}

nlohmann::ordered_json transcript(const TutorSession& session) {
  auto lines = nlohmann::ordered_json::array();
  for (const auto& e : session.events()) {
    nlohmann::ordered_json line;
    if (e.kind == EventKind::question) {
      line["speaker"] = "engine";
      line["kind"] = e.payload.at("kind");
      line["text"] = e.payload.at("text");
    } else if (e.payload.contains("prompt") && e.payload.contains("text")) {
      line["speaker"] = "student";
      line["kind"] = e.payload.at("prompt");
      line["text"] = e.payload.at("text");
    } else {
      continue;
    }
    line["seq"] = e.seq;
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

TutorService::TutorService(const Domain& domain, std::string cors_origin)
    : domain_(domain), cors_origin_(std::move(cors_origin)) {}

std::string TutorService::fresh_id() {
  static thread_local std::random_device device;
  static constexpr char hex[] = "0123456789abcdef";
  std::string id;
  for (int word = 0; word < 4; ++word) {
    std::uint32_t bits = device();
    for (int i = 0; i < 8; ++i, bits >>= 4) id.push_back(hex[bits & 0xF]);
  }
  return id;
}

std::shared_ptr<TutorService::Entry> TutorService::find(const std::string& id) const {
  std::lock_guard lock(registry_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string TutorService::insert(std::unique_ptr<TutorSession> session) {
  auto entry = std::make_shared<Entry>();
  entry->session = std::move(session);
  entry->created = std::chrono::system_clock::now();
  std::lock_guard lock(registry_mutex_);
  std::string id;
  do {
    id = fresh_id();
  } while (sessions_.count(id));
  sessions_.emplace(id, std::move(entry));
  return id;
}

std::size_t TutorService::session_count() const {
  std::lock_guard lock(registry_mutex_);
  return sessions_.size();
}

std::unique_lock<std::mutex> TutorService::lock_session(const std::string& id) {
  auto entry = find(id);
  if (!entry) return {};
  return std::unique_lock(entry->mutex);
}

nlohmann::ordered_json TutorService::turn(TutorSession& session, const std::string& id) {
  nlohmann::ordered_json body;
  body["id"] = id;
  body["status"] = std::string(to_string(session.status()));
  body["generation"] = session.generation();
  body["solved_at"] = session.solved_at() ? nlohmann::ordered_json(*session.solved_at()) : nullptr;
  auto messages = nlohmann::ordered_json::array();
  for (const auto& m : session.take_messages()) messages.push_back(to_json(m, domain_));
  body["messages"] = std::move(messages);
  body["prompt"] = prompt_or_null(session);
  return body;
}

Reply TutorService::create_session(const std::string& body) {
  Reply failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;
  if (!doc->is_object()) return error_reply(400, "invalid-config", "request body must be a JSON object");

  SessionOptions options;
  try {
    if (doc->contains("seed")) options.seed = doc->at("seed").get<std::uint64_t>();
    if (doc->contains("config")) options.config = ga_config_from_json(doc->at("config"));
    for (const char* key : {"target_capture", "target-capture"}) {
      if (doc->contains(key)) options.capture_target = doc->at(key).get<bool>();
    }
    options.config.validate();
  } catch (const Error& e) {
    return error_reply(400, to_string(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_reply(400, "invalid-config", e.what());
  }

  auto session = std::make_unique<TutorSession>(domain_, options);
  session->start();
  TutorSession& ref = *session;
  const std::string id = insert(std::move(session));
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return {201, turn(ref, id)};
}

Reply TutorService::restore_session(const std::string& body) {
  Reply failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;
  std::unique_ptr<TutorSession> session;
  try {
    session = kinetutor::restore_session(domain_, snapshot_from_json(*doc));
  } catch (const Error& e) {
    return error_reply(e.code() == ErrorCode::schema_violation ? 422 : 400, to_string(e.code()), e.what());
  }
  TutorSession& ref = *session;
  const std::string id = insert(std::move(session));
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return {201, turn(ref, id)};
}

Reply TutorService::submit_answer(const std::string& id, const std::string& body) {
  auto entry = find(id);
  if (!entry) return not_found(id);
  std::unique_lock lock(entry->mutex, std::try_to_lock);
  if (!lock.owns_lock()) return error_reply(409, "busy", "another request is being processed for this session");
  TutorSession& session = *entry->session;
  if (!session.awaiting_answer()) return error_reply(409, "no-pending-prompt", "the session is not waiting for an answer");

  Reply failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;
  try {
    session.submit(answer_from_json(*doc));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::answer_shape_mismatch) return error_reply(422, to_string(e.code()), e.what());
    return error_reply(500, to_string(e.code()), e.what());
  }
  return {200, turn(session, id)};
}

Reply TutorService::get_state(const std::string& id) {
  auto entry = find(id);
  if (!entry) return not_found(id);
  std::lock_guard lock(entry->mutex);
  const TutorSession& session = *entry->session;
  const Stores& stores = session.stores();

  nlohmann::ordered_json body;
  body["id"] = id;
  body["status"] = std::string(to_string(session.status()));
  body["generation"] = session.generation();
  body["solved_at"] = session.solved_at() ? nlohmann::ordered_json(*session.solved_at()) : nullptr;

  nlohmann::ordered_json target;
  const Target& t = session.target();
  target["variable"] = t.variable ? nlohmann::ordered_json(domain_.variable(*t.variable).symbol) : nullptr;
  target["object"] = t.object ? nlohmann::ordered_json(*t.object) : nullptr;
  target["zone"] = t.zone ? nlohmann::ordered_json(*t.zone) : nullptr;
  body["target"] = std::move(target);

  auto objects = nlohmann::ordered_json::array();
  for (const auto& [index, description] : stores.objects.entries()) {
    objects.push_back({{"index", index}, {"description", description}});
  }
  body["objects"] = std::move(objects);
  body["objects_closed"] = stores.objects.closed();

  auto zones = nlohmann::ordered_json::array();
  for (const auto& [key, info] : stores.zones.entries()) {
    zones.push_back({{"object", key.first}, {"zone", key.second}, {"description", info.description}});
  }
  body["zones"] = std::move(zones);

  auto orders = nlohmann::ordered_json::object();
  for (const auto& [index, description] : stores.objects.entries()) {
    if (auto order = stores.zones.temporal_order(index)) orders[std::to_string(index)] = *order;
  }
  body["zone_orders"] = std::move(orders);

  auto knowns = nlohmann::ordered_json::array();
  for (const auto& k : stores.knowns.entries()) knowns.push_back(to_json(k, domain_));
  body["knowns"] = std::move(knowns);

  auto per_generation = nlohmann::ordered_json::array();
  if (!session.events().empty()) per_generation = to_json(compute(session.events()), domain_).at("per_generation");
  body["per_generation"] = std::move(per_generation);
  body["prompt"] = prompt_or_null(session);
  body["transcript"] = transcript(session);
  return {200, std::move(body)};
}

Reply TutorService::get_metrics(const std::string& id) {
  auto entry = find(id);
  if (!entry) return not_found(id);
  std::lock_guard lock(entry->mutex);
  const TutorSession& session = *entry->session;
  if (session.events().empty()) return {200, to_json(RunMetrics{}, domain_)};
  return {200, to_json(compute(session.events()), domain_)};
}

Reply TutorService::get_snapshot(const std::string& id) {
  auto entry = find(id);
  if (!entry) return not_found(id);
  std::lock_guard lock(entry->mutex);
  return {200, to_json(snapshot(*entry->session))};
}

Reply TutorService::delete_session(const std::string& id) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(registry_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return not_found(id);
    entry = std::move(it->second);
    sessions_.erase(it);
  }
  std::lock_guard lock(entry->mutex);
  return {204, nullptr};
}

void TutorService::register_routes(httplib::Server& server) {
  server.set_default_headers({
      {"Access-Control-Allow-Origin", cors_origin_},
      {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
      {"Access-Control-Allow-Headers", "Content-Type"},
  });

  auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    if (reply.status != 204) res.set_content(reply.body.dump(), "application/json");
  };

  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.body));
  });
  server.Post("/sessions/restore", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, restore_session(req.body));
  });
  server.Post(R"(/sessions/([0-9a-f]+)/answer)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, submit_answer(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([0-9a-f]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_state(req.matches[1]));
  });
  server.Get(R"(/sessions/([0-9a-f]+)/metrics)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_metrics(req.matches[1]));
  });
  server.Get(R"(/sessions/([0-9a-f]+)/snapshot)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_snapshot(req.matches[1]));
  });
  server.Delete(R"(/sessions/([0-9a-f]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, delete_session(req.matches[1]));
  });
}

}  // namespace kinetutor
