#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "esym/integrator.hpp"

using namespace esym;

namespace {
OdeSystem exp_growth() {
  OdeSystem s;
  s.dim = 1;
  s.field = [](std::span<const double> x, std::span<double> dx) { dx[0] = x[0]; };
  s.state_names = {"x"};
  return s;
}

OdeSystem oscillator() {
  OdeSystem s;
  s.dim = 2;
  s.field = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = -x[0];
  };
  s.state_names = {"q", "p"};
  s.monitors = {{"energy", [](std::span<const double> x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); }}};
  return s;
}
}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("exponential to e") {
    IntegratorConfig c;
    c.rtol = 1e-9;
    c.atol = 1e-12;
    c.T = 1.0;
    const auto tr = integrate(exp_growth(), {1.0}, c);
    CHECK(tr.status == Status::completed);
    CHECK(tr.times.back() == 1.0);
    CHECK(std::abs(tr.states.back()[0] - std::exp(1.0)) < 1e-8);
  }

  TEST_CASE("fixed step is fourth order") {
    IntegratorConfig c;
    c.method = Method::rk4_fixed;
    c.T = 1.0;
    double prev = 0.0;
    for (double dt : {0.1, 0.05, 0.025}) {
      c.dt = dt;
      const auto tr = integrate(exp_growth(), {1.0}, c);
      const double err = std::abs(tr.states.back()[0] - std::exp(1.0));
      if (prev > 0) CHECK(prev / err == doctest::Approx(16.0).epsilon(0.1));
      prev = err;
    }
  }

  TEST_CASE("energy drift and report") {
    IntegratorConfig c;
    c.T = 20.0;
    const auto tr = integrate(oscillator(), {1.0, 0.0}, c);
    const auto r = invariant_report(tr);
    REQUIRE(r.channels.count("energy"));
    CHECK(r.channels.at("energy").initial == doctest::Approx(0.5));
    CHECK(r.channels.at("energy").max_rel < 1e-7);
    CHECK(r.final_time == 20.0);
    const auto j = report_to_json(r);
    CHECK(j["status"] == "completed");
  }

  TEST_CASE("tighter tolerance shrinks drift") {
    IntegratorConfig loose, tight;
    loose.T = tight.T = 30.0;
    loose.rtol = 1e-6;
    loose.atol = 1e-9;
    tight.rtol = 1e-9;
    tight.atol = 1e-12;
    const double a = invariant_report(integrate(oscillator(), {1.0, 0.0}, loose)).channels.at("energy").max_abs;
    const double b = invariant_report(integrate(oscillator(), {1.0, 0.0}, tight)).channels.at("energy").max_abs;
    CHECK(b < 0.5 * a);
  }

  TEST_CASE("constant state has no drift") {
    OdeSystem s = oscillator();
    s.field = [](std::span<const double>, std::span<double> dx) { dx[0] = dx[1] = 0.0; };
    IntegratorConfig c;
    c.T = 2.0;
    const auto r = invariant_report(integrate(s, {0.3, 0.4}, c));
    CHECK(r.channels.at("energy").max_abs == 0.0);
  }

  TEST_CASE("frozen components") {
    OdeSystem s = oscillator();
    s.field = [](std::span<const double> x, std::span<double> dx) {
      dx[0] = x[1];
      dx[1] = 1e-3 * x[0];
    };
    s.frozen = {1};
    IntegratorConfig c;
    c.T = 1.0;
    const auto tr = integrate(s, {0.0, 2.0}, c);
    for (const auto& st : tr.states) CHECK(st[1] == 2.0);
    CHECK(tr.states.back()[0] == doctest::Approx(2.0));
  }

  TEST_CASE("blow-up ends in step underflow") {
    OdeSystem s = exp_growth();
    s.field = [](std::span<const double> x, std::span<double> dx) { dx[0] = x[0] * x[0]; };
    IntegratorConfig c;
    c.T = 2.0;
    c.dt_min = 1e-10;
    const auto tr = integrate(s, {1.0}, c);
    CHECK(tr.status == Status::step_underflow);
    CHECK(tr.times.back() < 1.0);
    CHECK(tr.times.back() > 0.99);
  }

  TEST_CASE("region exit") {
    OdeSystem s = exp_growth();
    s.region = [](std::span<const double> x) { return x[0] < 2.0; };
    IntegratorConfig c;
    c.T = 5.0;
    const auto tr = integrate(s, {1.0}, c);
    CHECK(tr.status == Status::left_region);
    CHECK(tr.times.back() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
    CHECK_THROWS_AS(integrate(s, {3.0}, c), std::invalid_argument);
  }

  TEST_CASE("configuration validation") {
    IntegratorConfig c;
    c.T = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.dt_min = 1.0;
    c.dt_max = 0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(method_from_name("rk4_fixed") == Method::rk4_fixed);
    CHECK_THROWS(method_from_name("euler"));
    CHECK(status_from_name(status_name(Status::left_region)) == Status::left_region);
    CHECK_THROWS_AS(integrate(exp_growth(), {1.0, 2.0}, IntegratorConfig{}), std::invalid_argument);
  }

  TEST_CASE("sampling stride") {
    IntegratorConfig c;
    c.method = Method::rk4_fixed;
    c.dt = 0.01;
    c.T = 1.0;
    c.sample_stride = 10;
    const auto tr = integrate(exp_growth(), {1.0}, c);
    CHECK(tr.times.size() == 11);
  }

  TEST_CASE("serialization round trip") {
    IntegratorConfig c;
    c.T = 3.0;
    const auto tr = integrate(oscillator(), {1.0, 0.0}, c);
    const auto j = trajectory_to_json(tr, {{"state_size", 2}});
    const auto back = trajectory_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.state_names == tr.state_names);
    CHECK(back.monitor_names == tr.monitor_names);
    CHECK(back.times == tr.times);
    CHECK(back.states == tr.states);
    std::ostringstream a, b;
    write_csv(tr, a);
    write_csv(back, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("t,q,p,energy\r\n", 0) == 0);
    CHECK(format_g17(0.1) == "0.10000000000000001");
  }
}
