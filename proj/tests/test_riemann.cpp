#include <doctest.h>

#include <cmath>
#include <vector>

#include "esym/riemann.hpp"
#include "esym/scenarios.hpp"
#include "oracles.hpp"

using namespace esym;

TEST_SUITE("riemann") {
  TEST_CASE("sharp and flat") {
    const auto f = make_foliation_structure(2, 2);
    const EMetric I(f, {{Expr(1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}});
    const EMetric D(f, {{Expr(2.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}});
    const std::vector<double> q{0.1, 0.2}, a{4, 3};
    const auto v = metric_sharp(I, q, a);
    CHECK(v(0) == 4.0);
    CHECK(v(1) == 3.0);
    const auto w = metric_sharp(D, q, a);
    CHECK(w(0) == doctest::Approx(2.0));
    CHECK(w(1) == doctest::Approx(3.0));
    const std::vector<double> wv{w(0), w(1)};
    const auto back = metric_flat(D, q, wv);
    CHECK(back(0) == doctest::Approx(4.0));
    CHECK(back(1) == doctest::Approx(3.0));
  }

  TEST_CASE("kinetic Hamiltonian") {
    const auto f = make_foliation_structure(2, 2);
    const EMetric I(f, {{Expr(1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}});
    CHECK(kinetic_hamiltonian(I, PhasePoint{{0, 0}, {3, 4}}) == doctest::Approx(25.0));
    CHECK(kinetic_hamiltonian(I, PhasePoint{{0, 0}, {0, 0}}) == 0.0);
    const EFunction K = kinetic_efunction(I);
    const std::vector<double> x{0.5, 0.5, 3, 4};
    CHECK(K.eval(x) == doctest::Approx(25.0));
  }

  TEST_CASE("degenerate and signature checks") {
    const auto f = make_foliation_structure(2, 2);
    const EMetric S(f, {{Expr(1.0), Expr(1.0)}, {Expr(1.0), Expr(1.0)}});
    const std::vector<double> q{0.1, 0.2}, a{1, 0};
    CHECK_THROWS_AS(metric_sharp(S, q, a), DegenerateMetricError);
    const EMetric L(f, {{Expr(-1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}}, 1);
    CHECK(signature_matches(L, q));
    const EMetric L0(f, {{Expr(-1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}}, 0);
    CHECK_FALSE(signature_matches(L0, q));
  }

  TEST_CASE("Penrose metric inverse against the adjugate") {
    const EMetric g = penrose_metric(1.0);
    oracle::Rng rng(9);
    for (int s = 0; s < 6; ++s) {
      const double al = oracle::uni(rng, 0.02, 0.15), be = oracle::uni(rng, -0.5, 0.5);
      const std::vector<double> q{al, be};
      if (!g.frame.chart.contains(q)) continue;
      const Eigen::Matrix2d M = g.matrix(q);
      Eigen::Matrix2d adj;
      adj << M(1, 1), -M(0, 1), -M(1, 0), M(0, 0);
      const Eigen::Matrix2d inv = adj / (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0));
      const std::vector<double> alpha{0.3, -0.7};
      const Eigen::VectorXd v = metric_sharp(g, q, alpha);
      const Eigen::Vector2d want = inv * Eigen::Vector2d(0.3, -0.7);
      CHECK((v - want).norm() < 1e-9 * (1 + want.norm()));
      CHECK(signature_matches(g, q));
    }
  }

  TEST_CASE("geodesic field is the Hamiltonian field of the kinetic energy") {
    const auto f = make_b_structure(2, 1);
    const std::vector<std::string> nm{"x", "y"};
    const EMetric g(f, {{parse("1 + y^2", nm), parse("0.1*x", nm)}, {Expr(0.0), parse("2 + x^2", nm)}});
    const auto ps = cotangent_bundle(f);
    const PhasePoint pt{{0.3, 0.6}, {0.7, -0.4}};
    const auto G = geodesic_field(g, pt);
    const auto X = hamiltonian_field(kinetic_efunction(g), ps, pt.flat());
    REQUIRE(G.size() == X.size());
    for (std::size_t i = 0; i < G.size(); ++i) CHECK(G[i] == doctest::Approx(X[i]).epsilon(1e-10));
  }
}
