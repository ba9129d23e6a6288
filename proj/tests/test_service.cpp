#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "kinetutor/experiment.hpp"
#include "kinetutor/service.hpp"
#include "support.hpp"

using namespace kinetutor;
using json = nlohmann::json;

namespace {

const Domain& K() { return Domain::kinematics(); }

std::string answer_body(const Answer& a) { return to_json(a).dump(); }

std::string created_id(TutorService& service, const std::string& body = R"({"seed": 1})") {
  const auto reply = service.create_session(body);
  REQUIRE(reply.status == 201);
  return reply.body.at("id").get<std::string>();
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("a new session opens on the target question") {
  TutorService service(K());
  const auto reply = service.create_session(R"({"seed": 1})");
  CHECK(reply.status == 201);
  CHECK(reply.body.at("id").get<std::string>().size() == 32);
  CHECK(reply.body.at("status") == "running");
  CHECK(reply.body.at("prompt").at("kind") == "target");
  CHECK(service.session_count() == 1);

  const auto skipped = service.create_session(R"({"seed": 1, "target_capture": false})");
  CHECK(skipped.body.at("prompt").at("kind") == "new-object");
}

TEST_CASE("bad requests") {
  TutorService service(K());
  CHECK(service.create_session(R"({"config": {"population_size": 1}})").status == 400);
  CHECK(service.create_session("{not json").status == 400);
  CHECK(service.create_session("[1]").status == 400);
  CHECK(service.submit_answer("deadbeef", "{}").status == 404);
  CHECK(service.get_state("deadbeef").status == 404);
  CHECK(service.get_metrics("deadbeef").status == 404);
  CHECK(service.delete_session("deadbeef").status == 404);

  const std::string id = created_id(service);
  CHECK(service.submit_answer(id, answer_body(testing::text("x"))).status == 200);
  CHECK(service.submit_answer(id, answer_body(testing::text("a car"))).status == 200);
  const auto mismatch = service.submit_answer(id, R"({"text": "sure"})");
  CHECK(mismatch.status == 422);
  CHECK(mismatch.body.at("error") == "answer-shape-mismatch");

  SUBCASE("a busy session answers 409") {
    auto lock = service.lock_session(id);
    REQUIRE(lock.owns_lock());
    CHECK(service.submit_answer(id, answer_body(testing::yes())).status == 409);
  }
  SUBCASE("a finished session has nothing pending") {
    const std::string done = created_id(service, R"({"config": {"max_generations": 0}})");
    const auto reply = service.submit_answer(done, answer_body(testing::yes()));
    CHECK(reply.status == 409);
    CHECK(reply.body.at("error") == "no-pending-prompt");
  }
}

TEST_CASE("a scripted dialog reaches solved through the API") {
  SessionOptions options;
  options.seed = 2;
  const auto run = run_scripted(K(), testing::car_script(), options);
  REQUIRE(run.status == SessionStatus::solved);

  TutorService service(K());
  const std::string id = created_id(service, R"({"seed": 2})");
  TutorService::Reply reply;
  for (const auto& a : run.snapshot.answers) {
    reply = service.submit_answer(id, answer_body(a));
    REQUIRE(reply.status == 200);
  }
  CHECK(reply.body.at("status") == "solved");
  CHECK(reply.body.at("solved_at") == *run.solved_at);
  CHECK(reply.body.at("prompt").is_null());

  const auto state = service.get_state(id);
  CHECK(state.body.at("knowns").size() == run.stores.knowns.size());
  CHECK(state.body.at("target").at("variable") == "x");
  CHECK(state.body.at("per_generation").size() == static_cast<std::size_t>(*run.solved_at));

  const auto metrics = service.get_metrics(id);
  CHECK(metrics.status == 200);
  CHECK(metrics.body.at("solved_at") == *run.solved_at);

  const auto snap = service.get_snapshot(id);
  const auto restored = service.restore_session(snap.body.dump());
  CHECK(restored.status == 201);
  CHECK(restored.body.at("status") == "solved");

  json tampered = json::parse(snap.body.dump());
  tampered["options"]["seed"] = 3;
  CHECK(service.restore_session(tampered.dump()).status == 422);

  CHECK(service.delete_session(id).status == 204);
  CHECK(service.get_state(id).status == 404);
}

TEST_CASE("fresh state") {
  TutorService service(K());
  const std::string id = created_id(service);
  const auto state = service.get_state(id);
  CHECK(state.status == 200);
  CHECK(state.body.at("knowns").empty());
  CHECK(state.body.at("generation") == 1);
  CHECK(state.body.at("objects").empty());
  CHECK(state.body.at("transcript").size() == 1);
}

TEST_CASE("equal seeds ask equal questions") {
  TutorService service(K());
  const std::string a = created_id(service, R"({"seed": 8})");
  const std::string b = created_id(service, R"({"seed": 8})");
  CHECK(a != b);
  for (const auto& answer : {testing::text("x"), testing::text("a car"), testing::no(), testing::no()}) {
    const auto ra = service.submit_answer(a, answer_body(answer));
    const auto rb = service.submit_answer(b, answer_body(answer));
    CHECK(ra.body.at("prompt") == rb.body.at("prompt"));
  }
}

TEST_CASE("HTTP transport") {
  TutorService service(K(), "http://localhost:5173");
  httplib::Server server;
  service.register_routes(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", R"({"seed": 1})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
  const std::string id = json::parse(created->body).at("id");

  auto answered = client.Post("/sessions/" + id + "/answer", R"({"text": "x"})", "application/json");
  REQUIRE(answered);
  CHECK(answered->status == 200);
  CHECK(json::parse(answered->body).at("prompt").at("kind") == "new-object");

  auto state = client.Get("/sessions/" + id);
  REQUIRE(state);
  CHECK(state->status == 200);
  CHECK(json::parse(state->body).at("target").at("variable") == "x");

  auto preflight = client.Options("/sessions");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);

  auto missing = client.Get("/sessions/0123abcd/metrics");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto removed = client.Delete("/sessions/" + id);
  REQUIRE(removed);
  CHECK(removed->status == 204);

  server.stop();
  worker.join();
}

}  // TEST_SUITE
