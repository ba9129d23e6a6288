#include <doctest.h>

#include "kinetutor/error.hpp"
#include "kinetutor/experiment.hpp"
#include "kinetutor/scripted_student.hpp"
#include "support.hpp"

using namespace kinetutor;

namespace {

const Domain& K() { return Domain::kinematics(); }

Prompt prompt(PromptKind kind, Expected expected, PromptContext ctx) { return Prompt{kind, "?", expected, ctx}; }

PromptContext at(int object, std::optional<int> zone = std::nullopt, const char* var = nullptr) {
  PromptContext ctx;
  ctx.object = object;
  ctx.zone = zone;
  if (var) ctx.variable = K().variable_id(var);
  return ctx;
}

ErrorCode code_of(std::string_view text) {
  try {
    parse_script(text, K());
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_failure;
}

}  // namespace

TEST_SUITE("scripted_student") {

TEST_CASE("the bundled car problem") {
  const auto& s = testing::car_script();
  REQUIRE(s.objects.size() == 1);
  CHECK(s.objects[0].zones.size() == 2);
  CHECK(s.objects[0].zones[1].description == "coasting");
  CHECK(s.target.variable == K().variable_id("x"));
  CHECK(s.target.zone == 1);
  CHECK(s.objects[0].link_consents == std::vector<bool>{true});
}

TEST_CASE("parse and schema errors") {
  CHECK(code_of("") == ErrorCode::parse_error);
  try {
    parse_script("{\n  \"objects\": [,\n}", K());
    FAIL("expected parse-error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(code_of(R"({"objects": [], "target": {"object": 0, "variable": "x", "zone": 0}})") ==
        ErrorCode::schema_violation);
  CHECK(code_of(R"({"objects": [{"description": "a car", "zones": [{"description": "z", "facts": {}}]}],
                    "target": {"object": 3, "variable": "x", "zone": 0}})") == ErrorCode::schema_violation);
  CHECK(code_of(R"({"objects": [{"description": "a car", "zones": [{"description": "z", "facts": {"w": "1"}}]}],
                    "target": {"object": 0, "variable": "x", "zone": 0}})") == ErrorCode::schema_violation);
  CHECK(code_of(R"({"objects": [{"description": "a car", "zones": [{"description": "z", "facts": {}}]}],
                    "target": {"object": 0, "variable": "x", "zone": 4}})") == ErrorCode::schema_violation);
  CHECK_THROWS_AS(load_script(testing::data_file("missing.json"), K()), Error);
}

TEST_CASE("objects are revealed in order, then refused") {
  auto script = testing::car_script();
  script.objects.push_back(script.objects[0]);
  script.objects[1].description = "a truck";
  ScriptedStudent student(script, K());
  CHECK(student.answer(prompt(PromptKind::new_object, Expected::free_text, at(3))).text == "a car");
  CHECK(student.answer(prompt(PromptKind::more_objects, Expected::yes_no, at(3))).affirmative == true);
  CHECK(student.answer(prompt(PromptKind::new_object, Expected::free_text, at(6))).text == "a truck");
  CHECK(student.answer(prompt(PromptKind::more_objects, Expected::yes_no, at(6))).affirmative == false);
  CHECK(student.answer(prompt(PromptKind::new_object, Expected::free_text, at(1))).text == "no");
}

TEST_CASE("facts are tied to zones as the dialog binds them") {
  ScriptedStudent student(testing::car_script(), K());
  student.answer(prompt(PromptKind::new_object, Expected::free_text, at(2)));

  // a is known in both zones; the first unbound zone answers
  CHECK(student.answer(prompt(PromptKind::know_variable, Expected::free_text, at(2, 4, "a"))).text == "5 m/s^2");
  CHECK(student.answer(prompt(PromptKind::zone_description, Expected::free_text, at(2, 4))).text ==
        "accelerating away from the traffic light");
  CHECK(student.answer(prompt(PromptKind::know_variable, Expected::free_text, at(2, 6, "dt"))).text == "3 s");
  CHECK(student.answer(prompt(PromptKind::zone_description, Expected::free_text, at(2, 6))).text == "coasting");

  // the coasting start speed is only known through a link
  CHECK(student.answer(prompt(PromptKind::know_variable, Expected::free_text, at(2, 6, "v0x"))).text == "no");
  CHECK(student.answer(prompt(PromptKind::know_variable, Expected::free_text, at(2, 4, "v0x"))).text == "0 m/s");

  PromptContext order = at(2);
  order.zones = {4, 6};
  CHECK(student.answer(prompt(PromptKind::zone_order, Expected::ordering, order)).text == "4 6");

  PromptContext link = at(2, 4);
  link.to_zone = 6;
  CHECK(student.answer(prompt(PromptKind::zone_link, Expected::yes_no, link)).affirmative == true);
  link.zone = 6;
  link.to_zone = 4;
  CHECK(student.answer(prompt(PromptKind::zone_link, Expected::yes_no, link)).affirmative == false);

  PromptContext target = at(2, 6);
  target.target_stage = "zone";
  CHECK(student.answer(prompt(PromptKind::target_confirm, Expected::yes_no, target)).affirmative == true);

  CHECK_THROWS_AS(student.answer(prompt(PromptKind::info, Expected::none, {})), Error);
  CHECK_THROWS_AS(student.answer(prompt(PromptKind::zone_description, Expected::free_text, at(2, 1))), Error);
}

TEST_CASE("cautions are confirmed only for consistent facts") {
  ScriptedStudent student(testing::car_script(), K());
  student.answer(prompt(PromptKind::new_object, Expected::free_text, at(0)));
  student.answer(prompt(PromptKind::know_variable, Expected::free_text, at(0, 0, "a")));
  student.answer(prompt(PromptKind::zone_description, Expected::free_text, at(0, 0)));

  PromptContext ctx = at(0, 0, "v0x");
  ctx.past_variable = K().variable_id("a");
  ctx.past_response = "5 m/s^2";
  ctx.candidate_response = "0 m/s";
  CHECK(student.answer(prompt(PromptKind::caution_confirm, Expected::yes_no, ctx)).affirmative == true);
  ctx.candidate_response = "7 m/s";
  CHECK(student.answer(prompt(PromptKind::caution_confirm, Expected::yes_no, ctx)).affirmative == false);
}

TEST_CASE("scripted runs are deterministic") {
  const auto a = run_scripted(K(), testing::car_script(), SessionOptions{});
  const auto b = run_scripted(K(), testing::car_script(), SessionOptions{});
  CHECK(a.solved_at == b.solved_at);
  CHECK(a.stores.knowns.entries() == b.stores.knowns.entries());
  CHECK(a.snapshot.answers.size() == b.snapshot.answers.size());
}

}  // TEST_SUITE
