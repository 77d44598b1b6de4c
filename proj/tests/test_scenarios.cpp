#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "esym/scenarios.hpp"
#include "oracles.hpp"

using namespace esym;

namespace {
InvariantReport run(const ScenarioSpec& s, double T) {
  IntegratorConfig c = s.integrator;
  c.T = T;
  return invariant_report(integrate(s.system(), s.x0, c));
}
}  // namespace

TEST_SUITE("scenarios") {
  TEST_CASE("catalogue builds with finite initial velocities") {
    const auto names = scenario_names();
    CHECK(names.size() >= 6);
    for (const auto& n : names) {
      const auto s = make_scenario(n);
      CHECK(s.name == n);
      CHECK_FALSE(s.provenance.empty());
      CHECK(static_cast<int>(s.x0.size()) == s.state_size());
      CHECK(s.in_region(s.x0));
      for (double v : s.velocity(s.x0)) CHECK(std::isfinite(v));
    }
    CHECK_THROWS(make_scenario("nonexistent"));
  }

  TEST_CASE("short runs conserve energy") {
    for (const auto& n : scenario_names()) {
      if (n == "mcgehee_3bp") continue;
      const auto r = run(make_scenario(n), 1.0);
      CHECK_MESSAGE(r.channels.at("energy").max_rel < 1e-7, n);
    }
  }

  TEST_CASE("boundary is invariant") {
    ScenarioParams p;
    p.num["x0_h"] = 0.0;
    const auto s = scenario_radko_sphere_geodesic(p);
    const auto tr = integrate(s.system(), s.x0, s.integrator);
    for (const auto& st : tr.states) CHECK(st[0] == 0.0);
    const auto r = invariant_report(tr);
    CHECK(r.channels.at("bdist_h").max_abs == 0.0);
  }

  TEST_CASE("abelian Wong charge does not move") {
    const auto r = run(scenario_wong_u1_plane(), 5.0);
    CHECK(r.channels.at("charge_1").max_abs == 0.0);
  }

  TEST_CASE("non-abelian charge keeps its norm") {
    const auto r = run(scenario_wong_so3_b(), 5.0);
    CHECK(r.channels.at("casimir_norm").max_rel < 1e-7);
  }

  TEST_CASE("Kepler collision in McGehee coordinates underflows") {
    ScenarioParams p;
    p.str["potential"] = "kepler";
    p.num["x0_x"] = 1.0;
    p.num["x0_alpha"] = 0.0;
    p.num["x0_P_r"] = -1.0;
    p.num["x0_P_alpha"] = 0.0;
    const auto s = scenario_mcgehee_3bp(p);
    IntegratorConfig c = s.integrator;
    c.T = 10.0;
    const auto tr = integrate(s.system(), s.x0, c);
    CHECK(tr.status == Status::step_underflow);
    CHECK(tr.times.back() < 10.0);
  }

  TEST_CASE("Penrose kinetic energy stays bounded at the horizon corner") {
    const EMetric g = penrose_metric(1.0);
    const auto s = scenario_penrose_blackhole();
    double prev = NAN, prev_a = 1.0;
    for (double a : {1e-1, 1e-3, 1e-6, 0.0}) {
      const std::vector<double> x{a, 0.1, 0.4, -0.2};
      const double K = s.hamiltonian.eval(x);
      CHECK(std::isfinite(K));
      if (prev_a < 1e-2) CHECK(std::abs(K - prev) < 10 * prev_a);
      prev = K;
      prev_a = a;
    }
    const std::vector<double> q{0.05, 0.2};
    CHECK(signature_matches(g, q));
  }

  TEST_CASE("reduced Calogero forms agree") {
    const double u = 0.7;
    const std::complex<double> z(0.3, -0.4);
    Eigen::MatrixXcd X(2, 2);
    X << u, z, std::conj(z), -u;
    const auto f = calogero_reduced_hamiltonian({1.0, -1.0}, X);
    const double want = 2 * u * u + 2 * std::norm(z);
    CHECK(f.trace == doctest::Approx(want));
    CHECK(f.reduced == doctest::Approx(want));

    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = 0.5;
    D(1, 1) = -1.5;
    const auto d = calogero_reduced_hamiltonian({2.0, 3.0}, D);
    CHECK(d.reduced == doctest::Approx(2.5));

    oracle::Rng rng(17);
    for (int s = 0; s < 5; ++s) {
      Eigen::MatrixXcd Y(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Y(i, j) = {oracle::uni(rng, -1, 1), oracle::uni(rng, -1, 1)};
      Y = 0.5 * (Y + Y.adjoint()).eval();
      Y -= (Y.trace() / 3.0) * Eigen::MatrixXcd::Identity(3, 3);
      const std::vector<double> a{oracle::uni(rng, -2, -1), oracle::uni(rng, -0.5, 0.5), oracle::uni(rng, 1, 2)};
      const auto r = calogero_reduced_hamiltonian(a, Y);
      const double tr = (Y * Y).trace().real();
      CHECK(std::abs(r.trace - tr) < 1e-10);
      CHECK(std::abs(r.reduced - tr) < 1e-10);
    }
    CHECK_THROWS(calogero_reduced_hamiltonian({1.0, 1.0}, X));
  }

  TEST_CASE("parameters reach the scenario") {
    ScenarioParams p;
    p.num["x0_eps"] = -0.25;
    const auto s = scenario_lorentz_plane(p);
    CHECK(s.x0[0] == -0.25);
    ScenarioParams bad;
    bad.num["M"] = -1.0;
    CHECK_THROWS(scenario_penrose_blackhole(bad));
  }
}
