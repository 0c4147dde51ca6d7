#include <doctest.h>

#include <numbers>

#include "fca/fca_spec.hpp"

using namespace fca;

TEST_CASE("family JSON round trip") {
  FcaSpec s = spec_from_json_text(
      R"({"family":"sw","phi":1.25,"cellwise":{"kind":"even_phase","theta":0.5}})");
  auto* sw = std::get_if<SwFamily>(&s);
  REQUIRE(sw);
  CHECK(sw->phi == doctest::Approx(1.25));
  CHECK(sw->cellwise.theta == doctest::Approx(0.5));
  CHECK(spec_name(s) == "sw");
  CHECK(spec_is_margolus(s));

  FcaSpec sh = spec_from_json_text(R"({"family":"shift","dir":-1})");
  CHECK(std::get<ShiftFamily>(sh).dir == -1);
  CHECK(!spec_is_margolus(sh));

  FcaSpec ms = spec_from_json_text(R"({"family":"majorana_shift","dir":1,"theta":3.0})");
  CHECK(std::get<MajoranaShiftFamily>(ms).theta == doctest::Approx(3.0));
}

TEST_CASE("angles reduce mod 2 pi") {
  constexpr double tau = 2 * std::numbers::pi;
  FcaSpec s = validate_spec(SwFamily{tau + 0.5, {CellwiseKind::OddRotation, -0.25}});
  auto& sw = std::get<SwFamily>(s);
  CHECK(sw.phi == doctest::Approx(0.5));
  CHECK(sw.cellwise.theta == doctest::Approx(tau - 0.25));
}

TEST_CASE("circuit gates must be even unitaries") {
  FcaSpec good = spec_from_json_text(
      R"({"circuit":{"layer1":"0.70710678118654752*I@I + 0.70710678118654752i*Z@Z",
                     "layer2":"I@I"}})");
  CHECK(spec_name(good) == "circuit");

  CHECK_THROWS_AS(spec_from_json_text(R"({"circuit":{"layer1":"X@I","layer2":"I@I"}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json_text(R"({"circuit":{"layer1":"2*I@I","layer2":"I@I"}})"),
                  std::invalid_argument);
}

TEST_CASE("generator maps must preserve the CAR") {
  // the identity rule X0 -> X0, Y0 -> Y0 written on the 3-cell window
  FcaSpec ok = spec_from_json_text(R"({"generator_map":{"X0":"I@X@I","Y0":"I@Y@I"}})");
  CHECK(spec_name(ok) == "generator_map");

  // X0 and Y0 mapped to the same generator: CAR violated
  CHECK_THROWS_AS(spec_from_json_text(R"({"generator_map":{"X0":"I@X@I","Y0":"I@X@I"}})"),
                  std::invalid_argument);
  // even image
  CHECK_THROWS_AS(spec_from_json_text(R"({"generator_map":{"X0":"I@Z@I","Y0":"I@Y@I"}})"),
                  std::invalid_argument);
}

TEST_CASE("malformed JSON names the position") {
  CHECK_THROWS_WITH_AS(spec_from_json_text("{family: sw"), doctest::Contains("JSON"),
                       std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json_text(R"({"family":"nope"})"), std::invalid_argument);
}
