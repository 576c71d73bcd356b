#include <catch2/catch.hpp>

#include <string>

#include "harmwave/scenario.hpp"

using namespace harmwave;

namespace {

const char* kMinimal =
    "omega0 = 1\n"
    "omega = 0.5\n"
    "gamma = 1\n"
    "sweep = t\n"
    "lo = 0\n"
    "hi = 10\n"
    "samples = 11\n";

}  // namespace

TEST_CASE("minimal scenario gets defaults") {
  const Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.omega0 == 1.0);
  CHECK(sc.omega == 0.5);
  CHECK(sc.gamma == 1.0);
  CHECK(sc.hbar == 1.0);
  CHECK(sc.mass == 1.0);
  CHECK(sc.sweep == SweepVariable::time);
  CHECK(sc.samples == 11);
  CHECK(sc.format == OutputFormat::csv);
  CHECK_FALSE(sc.unwrap);
  REQUIRE(sc.outputs.size() == 2);
  CHECK(sc.outputs[0] == Quantity::width);
  CHECK(sc.outputs[1] == Quantity::mu_principal);
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text = std::string("# header comment\n\n") + kMinimal +
                           "outputs = B, u, gouy_rate  # trailing comment\n";
  const Scenario sc = parse_scenario(text);
  REQUIRE(sc.outputs.size() == 3);
  CHECK(sc.outputs[1] == Quantity::inv_curvature);
  CHECK(sc.outputs[2] == Quantity::gouy_rate);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_scenario("omega0 = 1\ngamma = abc\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  try {
    parse_scenario("omega0 = 1\nomega 2\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
  try {
    parse_scenario(std::string(kMinimal) + "samples = 7\n");
    FAIL("expected duplicate-key ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
}

TEST_CASE("unknown keys and semantic problems raise ValidationError") {
  try {
    parse_scenario(std::string(kMinimal) + "color = red\n");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(std::string(e.what()).find("color") != std::string::npos);
  }
  // missing required field
  CHECK_THROWS_AS(parse_scenario("omega0 = 1\n"), Error);
  // omega sweep needs an evaluation time
  CHECK_THROWS_AS(
      parse_scenario("omega0 = 1\ngamma = 0\nsweep = omega\nlo = 0.5\nhi = 2\nsamples = 5\n"),
      Error);
  // lo >= hi
  CHECK_THROWS_AS(
      parse_scenario("omega0 = 1\nomega = 1\ngamma = 0\nsweep = t\nlo = 2\nhi = 1\nsamples = 5\n"),
      Error);
  // samples < 2
  CHECK_THROWS_AS(
      parse_scenario("omega0 = 1\nomega = 1\ngamma = 0\nsweep = t\nlo = 0\nhi = 1\nsamples = 1\n"),
      Error);
  // non-positive frequency
  CHECK_THROWS_AS(
      parse_scenario("omega0 = -1\nomega = 1\ngamma = 0\nsweep = t\nlo = 0\nhi = 1\nsamples = 4\n"),
      Error);
}

TEST_CASE("omega sweep does not require a base omega") {
  const Scenario sc = parse_scenario(
      "omega0 = 10\ngamma = 1\nsweep = omega\nlo = 0.5\nhi = 40\nsamples = 100\n"
      "time = 1\noutputs = mu_principal,B\n");
  CHECK(sc.sweep == SweepVariable::omega);
  CHECK(sc.time == 1.0);
}

TEST_CASE("serialization round trip is idempotent on the canonical form") {
  const Scenario sc = parse_scenario(std::string(kMinimal) +
                                     "outputs = B,u,mu_unwrapped,covariance\n"
                                     "format = json\nunwrap = true\ntime = 0.25\n");
  const std::string canon = serialize_scenario(sc);
  const Scenario re = parse_scenario(canon);
  CHECK(serialize_scenario(re) == canon);
  CHECK(re.format == OutputFormat::json);
  CHECK(re.unwrap);
  CHECK(re.outputs.size() == 4);

  // a second shape, exercising 17-digit round-tripping of awkward values
  Scenario odd;
  odd.omega0 = 0.1;
  odd.omega = 2.0 / 3.0;
  odd.gamma = -1.2345678901234567;
  odd.sweep = SweepVariable::gamma;
  odd.lo = -3.0;
  odd.hi = 3.0;
  odd.samples = 601;
  odd.time = pi;
  odd.outputs = {Quantity::qfi, Quantity::cfi};
  const std::string text = serialize_scenario(odd);
  const Scenario back = parse_scenario(text);
  CHECK(back.omega == odd.omega);
  CHECK(back.gamma == odd.gamma);
  CHECK(back.time == odd.time);
  CHECK(serialize_scenario(back) == text);
}
