#include <doctest.h>

#include <string>

#include "esym/cli.hpp"

using namespace esym;

namespace {
std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("built-in scenario with overrides") {
    const auto c = parse_config(
        "scenario: radko_sphere_geodesic\n"
        "parameters: {x0_h: 0.25}\n"
        "integrator: {method: rk4_fixed, dt: 0.01, T: 2}\n"
        "output: {dir: o, format: csv, plot: ['h:theta']}\n"
        "seed: 9\n");
    CHECK(c.scenario == "radko_sphere_geodesic");
    CHECK(c.params.num.at("x0_h") == 0.25);
    CHECK(c.integrator_given);
    CHECK(c.integrator.method == Method::rk4_fixed);
    CHECK(c.integrator.T == 2.0);
    CHECK(c.out_dir == "o");
    CHECK(c.format == "csv");
    CHECK(c.plot.size() == 1);
    CHECK(c.seed == 9);
    const auto s = build_problem(c);
    CHECK(s.x0[0] == 0.25);
    CHECK(s.integrator.method == Method::rk4_fixed);
  }

  TEST_CASE("errors carry the line and key") {
    const auto e = error_of("scenario: radko_sphere\nbogus: 1\n");
    CHECK(e.find("t.yaml:2") != std::string::npos);
    CHECK(e.find("bogus") != std::string::npos);
    CHECK(error_of("scenario: nowhere\n").find("nowhere") != std::string::npos);
    CHECK_FALSE(error_of("parameters: {}\n").empty());
    CHECK_FALSE(error_of("scenario: radko_sphere\nintegrator: {dt: -1}\n").empty());
    CHECK_FALSE(error_of("scenario: radko_sphere\n  : [\n").empty());
  }

  TEST_CASE("malformed custom expression is named") {
    const auto e = error_of(
        "custom:\n"
        "  coords: [x, y]\n"
        "  frame:\n"
        "    family: custom\n"
        "    anchor:\n"
        "      - ['x*', '0']\n"
        "      - ['0', '1']\n"
        "  metric:\n"
        "    - ['1', '0']\n"
        "    - ['0', '1']\n");
    CHECK(e.find("x*") != std::string::npos);
    CHECK(e.find("t.yaml:6") != std::string::npos);
  }

  TEST_CASE("custom system builds") {
    const auto c = parse_config(
        "custom:\n"
        "  name: plane\n"
        "  coords: [x, y]\n"
        "  frame: {family: b, m: 1}\n"
        "  metric:\n"
        "    - ['1', '0']\n"
        "    - ['0', '2']\n"
        "initial: [0.1, 0.2, 0.3, 0.4]\n");
    const auto s = build_problem(c);
    CHECK(s.state_size() == 4);
    CHECK(s.hamiltonian.eval(s.x0) == doctest::Approx(0.09 + 0.08));
  }

  TEST_CASE("initial dimension mismatch") {
    CHECK(error_of("scenario: lorentz_plane\ninitial: [1, 2, 3]\n").find("dimension mismatch") != std::string::npos);
  }

  TEST_CASE("round trip through json and yaml") {
    const auto c = parse_config(
        "scenario: wong_so3_b\n"
        "parameters: {x0_q1: 0.3}\n"
        "initial: [0.3, 0.1, 0.2, -0.1, 0.5, 0.2, -0.4]\n"
        "seed: 7\n"
        "ensemble: {count: 3, spread: 0.01}\n");
    const auto j = config_to_json(c);
    const auto back = config_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.initial == c.initial);
    CHECK(back.params.num == c.params.num);
    CHECK(back.seed == 7);
    CHECK(back.ensemble == 3);
    const auto again = parse_config(config_to_yaml(c));
    CHECK(again.initial == c.initial);
    CHECK(again.params.num == c.params.num);
    auto ja = config_to_json(again), jc = j;
    ja.erase("integrator");
    jc.erase("integrator");
    CHECK(ja == jc);
  }
}
