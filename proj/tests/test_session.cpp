#include <doctest.h>

#include <sstream>

#include "kinetutor/error.hpp"
#include "kinetutor/experiment.hpp"
#include "kinetutor/session.hpp"
#include "support.hpp"

using namespace kinetutor;
using testing::no;
using testing::QueueIo;
using testing::text;
using testing::yes;

namespace {

const Domain& K() { return Domain::kinematics(); }

SessionOptions options(std::uint64_t seed, GaMode mode = GaMode::ga) {
  SessionOptions o;
  o.seed = seed;
  o.config.mode = mode;
  return o;
}

std::string dump(const std::vector<SessionEvent>& events) {
  std::ostringstream out;
  write_jsonl(events, K(), out);
  return out.str();
}

int count(const std::vector<SessionEvent>& events, EventKind kind) {
  int n = 0;
  for (const auto& e : events) n += e.kind == kind;
  return n;
}

}  // namespace

TEST_SUITE("session") {

TEST_CASE("zero generations ends exhausted without a question") {
  SessionOptions o;
  o.config.max_generations = 0;
  TutorSession session(K(), o);
  QueueIo io;
  CHECK(run_session(session, io) == SessionStatus::exhausted);
  CHECK(io.asked.empty());
  CHECK(session.events().empty());
}

TEST_CASE("the car problem is solved under both modes") {
  for (GaMode mode : {GaMode::ga, GaMode::random_control}) {
    CAPTURE(to_string(mode));
    const auto run = run_scripted(K(), testing::car_script(), options(1, mode));
    REQUIRE(run.status == SessionStatus::solved);
    REQUIRE(run.solved_at.has_value());
    CHECK(count(run.events, EventKind::fitness_snapshot) == *run.solved_at);
    CHECK(count(run.events, EventKind::ga_step) == *run.solved_at - 1);
    CHECK(replay_knowns(run.events).entries() == run.stores.knowns.entries());
  }
}

TEST_CASE("the same seed replays the same session") {
  const auto a = run_scripted(K(), testing::car_script(), options(4));
  const auto b = run_scripted(K(), testing::car_script(), options(4));
  CHECK(dump(a.events) == dump(b.events));
  const auto c = run_scripted(K(), testing::car_script(), options(5));
  CHECK(dump(a.events) != dump(c.events));
}

TEST_CASE("end of input aborts the session") {
  TutorSession session(K(), options(1));
  QueueIo io({text("x"), text("a car")});
  CHECK(run_session(session, io) == SessionStatus::aborted);
  CHECK(session.status() == SessionStatus::aborted);
  CHECK(io.asked.size() == 3);
}

TEST_CASE("turn-by-turn driving") {
  TutorSession session(K(), options(1));
  CHECK_THROWS_AS(session.submit(text("x")), Error);
  session.start();
  REQUIRE(session.awaiting_answer());
  CHECK(session.pending_prompt().kind == PromptKind::target);
  session.submit(text("x"));
  CHECK(session.pending_prompt().kind == PromptKind::new_object);
  session.submit(text("a car"));
  REQUIRE(session.pending_prompt().kind == PromptKind::target_confirm);

  try {
    session.submit(text("maybe"));
    FAIL("expected answer-shape-mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::answer_shape_mismatch);
  }
  CHECK(session.pending_prompt().kind == PromptKind::target_confirm);
  session.submit(yes());
  CHECK(session.target().object == 0);
  session.abort();
  CHECK(session.status() == SessionStatus::aborted);
  CHECK_FALSE(session.awaiting_answer());
}

TEST_CASE("snapshots restore to the same point") {
  TutorSession session(K(), options(3));
  ScriptedStudent student(testing::car_script(), K());
  session.start();
  for (int i = 0; i < 12 && session.awaiting_answer(); ++i) session.submit(student.answer(session.pending_prompt()));
  REQUIRE(session.awaiting_answer());

  const SessionSnapshot snap = snapshot(session);
  const auto round = snapshot_from_json(nlohmann::json::parse(to_json(snap).dump()));
  CHECK(round.answers.size() == 12);
  const auto restored = restore_session(K(), round);
  CHECK(restored->pending_prompt().text == session.pending_prompt().text);
  CHECK(dump(restored->events()) == dump(session.events()));

  SUBCASE("divergent snapshots are refused") {
    SessionSnapshot bad = round;
    bad.options.seed = 4;
    CHECK_THROWS_AS(restore_session(K(), bad), Error);
  }
  SUBCASE("a different recorded status is refused") {
    SessionSnapshot bad = round;
    bad.status = SessionStatus::solved;
    CHECK_THROWS_AS(restore_session(K(), bad), Error);
  }
}

TEST_CASE("organizational phase") {
  TutorSession session(K(), options(1));
  Stores& s = session.stores();
  s.objects.add(0, "a car");
  s.objects.close();
  s.zones.add(0, 2, "accelerating");

  SUBCASE("a single zone needs no ordering") {
    QueueIo io;
    s.knowns.insert({0, 1, 1, 2, "160 m", Provenance::student});
    CHECK(organizational_phase(session, io).empty());
    CHECK(io.asked.empty());
  }

  SUBCASE("two zones are ordered and linked once") {
    s.zones.add(0, 5, "coasting");
    s.knowns.insert({0, 1, 1, 2, "160 m", Provenance::student});
    QueueIo io({text("5 5"), text("2, 5"), yes()});
    const auto added = organizational_phase(session, io);
    CHECK(io.asked.size() == 3);
    CHECK(io.asked[0].kind == PromptKind::zone_order);
    CHECK(io.asked[2].kind == PromptKind::zone_link);
    CHECK(io.asked[2].text ==
          "Is the position of **a car** at the end of the time when it was **accelerating** the same as at the "
          "start of the time when it was **coasting**?");
    CHECK(s.zones.temporal_order(0) == std::vector<int>{2, 5});
    REQUIRE(added.size() == 1);
    CHECK(added[0] == KnownEntry{0, 1, 2, 5, "← x from zone 2", Provenance::zone_link});

    QueueIo again;
    CHECK(organizational_phase(session, again).empty());
    CHECK(again.asked.empty());
  }

  SUBCASE("invalid orderings are asked again") {
    s.zones.add(0, 5, "coasting");
    QueueIo io({text("2 2"), text("first"), text("2 5")});
    organizational_phase(session, io);
    CHECK(io.asked.size() == 3);
    CHECK(s.zones.temporal_order(0) == std::vector<int>{2, 5});
  }

  SUBCASE("declined links are not asked again") {
    s.zones.add(0, 5, "coasting");
    s.zones.set_temporal_order(0, {2, 5});
    s.knowns.insert({0, 2, 1, 2, "40 m/s", Provenance::student});
    QueueIo io({no()});
    CHECK(organizational_phase(session, io).empty());
    CHECK(io.asked.size() == 1);
    QueueIo again;
    organizational_phase(session, again);
    CHECK(again.asked.empty());
  }

  SUBCASE("a linked speed lands in the velocity equation") {
    s.zones.add(0, 5, "coasting");
    s.zones.set_temporal_order(0, {2, 5});
    s.knowns.insert({0, 2, 1, 2, "40 m/s", Provenance::student});
    QueueIo io({yes()});
    const auto added = organizational_phase(session, io);
    REQUIRE(added.size() == 2);
    CHECK(added[0] == KnownEntry{0, 2, 2, 5, "← v_x from zone 2", Provenance::zone_link});
    CHECK(added[1].key() == QuadTuple{0, 1, 3, 5});
  }
}

TEST_CASE("options JSON") {
  SessionOptions o = options(9, GaMode::random_control);
  o.capture_target = false;
  const auto back = session_options_from_json(nlohmann::json::parse(to_json(o).dump()));
  CHECK(back.seed == 9);
  CHECK(back.config.mode == GaMode::random_control);
  CHECK_FALSE(back.capture_target);
  CHECK_THROWS_AS(session_status_from_string("paused"), Error);
}

}  // TEST_SUITE
