#include <doctest.h>

#include "kinetutor/error.hpp"
#include "kinetutor/question_engine.hpp"
#include "support.hpp"

using namespace kinetutor;
using testing::no;
using testing::QueueIo;
using testing::text;
using testing::yes;

namespace {

struct Rig {
  const Domain& domain = Domain::kinematics();
  Stores stores;
  EventLog log;
  PromptChannel channel;
  QuestionEngine engine{domain, stores, log, channel};
  QueueIo io;

  TupleOutcome run(QuadTuple t) { return process_tuple(engine, channel, t, io); }
  VariableId id(const char* s) const { return domain.variable_id(s); }
};

}  // namespace

TEST_SUITE("question_engine") {

TEST_CASE("a fresh engine introduces the object and the zone before storing the value") {
  Rig r;
  r.io = QueueIo({text("a car"), no(), text("5 m/s^2"), text("speeding up")});
  const auto outcome = r.run({1, 2, 2, 1});
  REQUIRE(outcome.kind == TupleOutcome::Kind::answered);
  REQUIRE(r.io.asked.size() == 4);
  CHECK(r.io.asked[0].kind == PromptKind::new_object);
  CHECK(r.io.asked[1].kind == PromptKind::more_objects);
  CHECK(r.io.asked[2].kind == PromptKind::know_variable);
  CHECK(r.io.asked[2].text == "Do you know the initial velocity of **a car**?");
  CHECK(r.io.asked[3].kind == PromptKind::zone_description);
  CHECK(r.io.asked[3].text == "What was **a car** doing when it had the initial velocity which you said was **5 m/s^2**?");

  CHECK(r.stores.objects.closed());
  CHECK(r.stores.zones.description(1, 1) == "speeding up");
  REQUIRE(outcome.inserted.size() == 2);
  CHECK(outcome.inserted[0] == KnownEntry{1, 2, 2, 1, "5 m/s^2", Provenance::student});
  CHECK(outcome.inserted[1] == KnownEntry{1, 1, 3, 1, "5 m/s^2", Provenance::shared_propagation});
  CHECK(r.engine.elicited_responses() == 3);
}

TEST_CASE("rejection rules apply in order") {
  Rig r;
  r.stores.objects.add(0, "a ball");
  r.stores.zones.add(0, 0, "falling");
  r.stores.knowns.insert({0, 1, 1, 0, "3 m", Provenance::student});

  SUBCASE("rule 1: already known") {
    CHECK(r.engine.precheck({0, 1, 1, 0}) == 1);
    CHECK(r.run({0, 1, 1, 0}).rule == 1);
    CHECK(r.io.asked.empty());
  }
  SUBCASE("rule 1: asked earlier this generation") {
    r.io.push(no());
    CHECK(r.run({0, 3, 2, 0}).kind == TupleOutcome::Kind::declined);
    CHECK(r.run({0, 3, 2, 0}).rule == 1);
    r.engine.begin_generation(2);
    CHECK_FALSE(r.engine.precheck({0, 3, 2, 0}).has_value());
  }
  SUBCASE("rule 2: registry closed") {
    r.stores.objects.close();
    CHECK(r.engine.precheck({2, 1, 1, 0}) == 2);
    CHECK(r.run({2, 1, 1, 0}).rule == 2);
    CHECK(r.engine.precheck({2, 1, 1, 0}) == 2);
    CHECK(r.io.asked.empty());
  }
  SUBCASE("rule 2: the student sees no objects") {
    r.io.push(text("none"));
    CHECK(r.run({2, 1, 1, 0}).rule == 2);
    CHECK(r.stores.objects.closed());
    CHECK(r.engine.precheck({3, 1, 1, 0}) == 2);
  }
  SUBCASE("rule 3: equation out of range") {
    CHECK(r.engine.precheck({0, 5, 1, 0}) == 3);
    CHECK(r.run({0, 5, 1, 0}).rule == 3);
    CHECK(r.run({0, 0, 1, 0}).rule == 3);
    CHECK(r.run({0, 2, 5, 0}).rule == 3);
    CHECK(r.io.asked.empty());
  }
  SUBCASE("rule 2 precedes rule 3") {
    r.io = QueueIo({text("a rock"), no()});
    CHECK(r.run({4, 5, 1, 0}).rule == 3);
    CHECK(r.stores.objects.contains(4));
    CHECK(r.io.asked.size() == 2);
  }
  SUBCASE("rule 1 precedes rule 2 only for valid tuples") {
    r.stores.objects.close();
    CHECK(r.engine.precheck({2, 7, 7, 0}) == 2);
    CHECK(r.engine.precheck({0, 7, 7, 0}) == 3);
  }
}

TEST_CASE("registry closure is permanent") {
  Rig r;
  r.io = QueueIo({text("a car"), no()});
  r.io.push(no());  // know-variable declined
  CHECK(r.run({1, 1, 1, 1}).kind == TupleOutcome::Kind::declined);
  CHECK(r.run({2, 1, 1, 0}).rule == 2);
  CHECK(r.io.asked.size() == 3);
}

TEST_CASE("a second object triggers the multi-object notice") {
  Rig r;
  r.io = QueueIo({text("a car"), yes(), no(), text("a truck"), no(), no()});
  r.run({0, 1, 1, 0});
  CHECK_FALSE(r.stores.objects.closed());
  r.run({1, 1, 1, 0});
  CHECK(r.stores.objects.closed());
  REQUIRE(r.io.shown.size() >= 1);
  bool noticed = false;
  for (const auto& p : r.io.shown) noticed = noticed || p.kind == PromptKind::info;
  CHECK(noticed);
}

TEST_CASE("caution prompts") {
  Rig r;
  r.stores.objects.add(0, "a car");
  r.stores.objects.close();
  r.stores.zones.add(0, 0, "accelerating");
  r.stores.knowns.insert({0, 2, 3, 0, "2 m/s^2", Provenance::student});

  const Prompt p = r.engine.render_caution(r.id("v0x"), *r.stores.knowns.find({0, 2, 3, 0}), "0 m/s");
  CHECK(p.kind == PromptKind::caution_confirm);
  CHECK(p.expected == Expected::yes_no);
  CHECK(p.text ==
        "Do you know the initial velocity of **a car** at the start of the time when it was **accelerating**? "
        "Keep in mind that v0x is the speed as it obtained acceleration a_x, which you said was **2 m/s^2**. "
        "Is **0 m/s** still your answer?");

  SUBCASE("declining leaves the stores unchanged") {
    r.io = QueueIo({text("0 m/s"), no()});
    CHECK(r.run({0, 2, 2, 0}).kind == TupleOutcome::Kind::declined);
    CHECK(r.stores.knowns.size() == 1);
    CHECK(r.io.asked.back().kind == PromptKind::caution_confirm);
  }
  SUBCASE("confirming stores the value and its copies") {
    r.io = QueueIo({text("0 m/s"), yes()});
    const auto outcome = r.run({0, 2, 2, 0});
    CHECK(outcome.kind == TupleOutcome::Kind::answered);
    CHECK(r.stores.knowns.contains({0, 2, 2, 0}));
    CHECK(r.stores.knowns.contains({0, 1, 3, 0}));
  }
  SUBCASE("one caution per distinct known variable") {
    r.stores.knowns.insert({0, 1, 5, 0, "2 m/s^2", Provenance::shared_propagation});
    r.stores.knowns.insert({0, 3, 1, 0, "4 s", Provenance::student});
    r.io = QueueIo({text("0 m/s"), yes(), yes()});
    r.run({0, 2, 2, 0});
    CHECK(r.io.asked.size() == 3);
    CHECK(r.io.asked[2].text.find("v0x is the speed at the beginning of interval Δt") != std::string::npos);
  }
  SUBCASE("errors") {
    try {
      (void)r.engine.render_caution(r.id("a"), *r.stores.knowns.find({0, 2, 3, 0}), "1");
      FAIL("expected same-variable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::same_variable);
    }
    const KnownEntry stranger{6, 2, 3, 0, "1", Provenance::student};
    try {
      (void)r.engine.render_caution(r.id("v0x"), stranger, "1");
      FAIL("expected unknown-object");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unknown_object);
    }
  }
}

TEST_CASE("the moment wording follows the variable") {
  Rig r;
  r.stores.objects.add(0, "a car");
  r.stores.objects.close();
  r.stores.zones.add(0, 0, "coasting");
  r.io = QueueIo({no(), no(), no()});
  r.run({0, 1, 1, 0});
  r.run({0, 1, 4, 0});
  r.run({0, 3, 3, 0});
  CHECK(r.io.asked[0].text == "Do you know the final position of **a car** at the end of the time when it was **coasting**?");
  CHECK(r.io.asked[1].text == "Do you know the time interval of **a car** during the time when it was **coasting**?");
  CHECK(r.io.asked[2].text == "Do you know the initial time of **a car** at the start of the time when it was **coasting**?");
}

TEST_CASE("solvable variables are inserted") {
  Rig r;
  r.stores.objects.add(0, "a car");
  r.stores.zones.add(0, 0, "coasting");

  SUBCASE("the last unknown of the position equation") {
    for (int p = 2; p <= 5; ++p) r.stores.knowns.insert({0, 1, p, 0, "k", Provenance::student});
    const auto solved = r.engine.detect_solvable();
    REQUIRE(solved.size() == 1);
    CHECK(solved[0].key() == QuadTuple{0, 1, 1, 0});
    CHECK(solved[0].provenance == Provenance::solved_algebraically);
    REQUIRE(r.channel.take_messages().size() == 1);
  }
  SUBCASE("a solved interval propagates to the other equations") {
    r.stores.knowns.insert({0, 3, 2, 0, "11 s", Provenance::student});
    r.stores.knowns.insert({0, 3, 3, 0, "8 s", Provenance::student});
    const auto solved = r.engine.detect_solvable();
    REQUIRE(solved.size() == 3);
    CHECK(solved[0].key() == QuadTuple{0, 3, 1, 0});
    CHECK(solved[1].key() == QuadTuple{0, 1, 4, 0});
    CHECK(solved[1].provenance == Provenance::shared_propagation);
    CHECK(solved[2].key() == QuadTuple{0, 2, 4, 0});
  }
  SUBCASE("one known of four solves nothing") {
    r.stores.knowns.insert({0, 2, 3, 0, "0 m/s^2", Provenance::student});
    CHECK(r.engine.detect_solvable().empty());
    CHECK(r.stores.knowns.size() == 1);
  }
  SUBCASE("chains run to a fixed point") {
    r.stores.knowns.insert({0, 3, 2, 0, "11 s", Provenance::student});
    r.stores.knowns.insert({0, 3, 3, 0, "8 s", Provenance::student});
    r.stores.knowns.insert({0, 2, 2, 0, "40 m/s", Provenance::student});
    r.stores.knowns.insert({0, 2, 3, 0, "0 m/s^2", Provenance::student});
    r.stores.knowns.insert({0, 1, 2, 0, "160 m", Provenance::student});
    r.stores.knowns.insert({0, 1, 3, 0, "40 m/s", Provenance::student});
    r.stores.knowns.insert({0, 1, 5, 0, "0 m/s^2", Provenance::student});
    r.engine.detect_solvable();
    CHECK(r.stores.knowns.contains({0, 1, 1, 0}));
    CHECK(r.stores.knowns.contains({0, 2, 1, 0}));
  }
}

TEST_CASE("target capture") {
  Rig r;
  r.io = QueueIo({text("speed"), text("Final Position")});
  drive(r.engine.capture_target(), r.channel, r.io);
  CHECK(r.engine.target().variable == r.id("x"));
  CHECK(r.io.asked.size() == 2);
  CHECK(r.io.shown.back().kind == PromptKind::target);
  bool rejected = false;
  for (const auto& p : r.io.shown) rejected = rejected || p.kind == PromptKind::info;
  CHECK(rejected);
}

TEST_CASE("events record questions, answers and insertions") {
  Rig r;
  r.io = QueueIo({text("a car"), no(), text("5 m/s^2"), text("speeding up")});
  r.run({1, 2, 3, 1});
  int questions = 0, answers = 0, known = 0, propagated = 0;
  for (const auto& e : r.log.events()) {
    questions += e.kind == EventKind::question;
    answers += e.kind == EventKind::answer;
    known += e.kind == EventKind::known;
    propagated += e.kind == EventKind::propagation;
  }
  CHECK(questions == 4);
  CHECK(answers == 4);
  CHECK(known == 1);
  CHECK(propagated == 1);
  CHECK(replay_knowns(r.log.events()).entries() == r.stores.knowns.entries());
}

}  // TEST_SUITE
