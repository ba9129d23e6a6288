#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "kinetutor/domain.hpp"
#include "kinetutor/session.hpp"

namespace httplib {
class Server;
}

namespace kinetutor {

/// HTTP session API over TutorSession. Each session sits suspended on its pending
/// prompt between requests; a submit resumes it until the next prompt or the end.
///
///   POST   /sessions                 {seed?, config?, target_capture?}   -> 201
///   POST   /sessions/restore         snapshot document                   -> 201
///   POST   /sessions/{id}/answer     {text?, affirmative?}               -> 200 | 404 | 409 | 422
///   GET    /sessions/{id}                                                -> 200 | 404
///   GET    /sessions/{id}/metrics                                        -> 200 | 404
///   GET    /sessions/{id}/snapshot                                       -> 200 | 404
///   DELETE /sessions/{id}                                                -> 204 | 404
class TutorService {
 public:
  struct Reply {
    int status = 200;
    nlohmann::ordered_json body;
  };

  explicit TutorService(const Domain& domain, std::string cors_origin = "*");

  void register_routes(httplib::Server& server);

  Reply create_session(const std::string& body);
  Reply restore_session(const std::string& body);
  Reply submit_answer(const std::string& id, const std::string& body);
  Reply get_state(const std::string& id);
  Reply get_metrics(const std::string& id);
  Reply get_snapshot(const std::string& id);
  Reply delete_session(const std::string& id);

  std::size_t session_count() const;

  /// Holds a session's lock as an in-flight request would. Empty lock for unknown ids.
  std::unique_lock<std::mutex> lock_session(const std::string& id);

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<TutorSession> session;
    std::chrono::system_clock::time_point created;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  std::string insert(std::unique_ptr<TutorSession> session);
  std::string fresh_id();
  nlohmann::ordered_json turn(TutorSession& session, const std::string& id);

  const Domain& domain_;
  std::string cors_origin_;
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace kinetutor
