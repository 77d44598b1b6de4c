#include <doctest.h>

#include <cmath>
#include <vector>

#include "esym/gauge.hpp"
#include "oracles.hpp"

using namespace esym;

namespace {
GaugeData u1_plane() {
  return GaugeData(LieAlgebra::u1(), make_foliation_structure(2, 2), {{Expr(0.0)}, {Expr::var(0)}});
}

GaugeData so3_vanishing() {
  const Expr x = Expr::var(0), y = Expr::var(1);
  return GaugeData(LieAlgebra::so3(), make_vanishing_structure(),
                   {{Expr(0.2) * y, Expr(0.1) * x, Expr(0.3)}, {Expr(0.4) * x * x, Expr(-0.2), Expr(0.1) * y}});
}

double max_jacobi(const GaugeData& gd, BivectorMutation mut, std::uint64_t seed) {
  oracle::Rng rng(seed);
  const oracle::Bracket br{[gd, mut](std::span<const double> y) { return coupled_poisson_bivector(gd, y, mut); },
                           oracle::gauge_rows(gd)};
  const int N = gd.state_size();
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) {
    std::vector<double> y = oracle::interior_point(gd.frame, rng);
    while (static_cast<int>(y.size()) < N) y.push_back(oracle::uni(rng, -1, 1));
    const auto f = oracle::analytic(oracle::smooth_function(N, rng), N);
    const auto g = oracle::analytic(oracle::smooth_function(N, rng), N);
    const auto h = oracle::analytic(oracle::smooth_function(N, rng), N);
    worst = std::max(worst, br.jacobi(f, g, h, y));
  }
  return worst;
}
}  // namespace

TEST_SUITE("gauge") {
  TEST_CASE("algebras") {
    CHECK(LieAlgebra::u1().abelian());
    const auto so3 = LieAlgebra::so3();
    CHECK_FALSE(so3.abelian());
    CHECK(so3.at(0, 1, 2) == 1.0);
    CHECK(so3.at(1, 0, 2) == -1.0);
    CHECK(LieAlgebra::by_name("su2").d == 3);
    CHECK_THROWS_AS(LieAlgebra::by_name("e8"), std::invalid_argument);
    std::vector<double> bad(8, 0.0);
    bad[(0 * 2 + 1) * 2 + 0] = 1.0;
    CHECK_THROWS_AS(LieAlgebra::custom("bad", 2, bad), std::invalid_argument);
    bad[(1 * 2 + 0) * 2 + 0] = -1.0;
    CHECK_NOTHROW(LieAlgebra::custom("aff", 2, bad));
  }

  TEST_CASE("curvature") {
    const std::vector<double> q{0.3, -0.8};
    const GaugeData flat(LieAlgebra::u1(), make_foliation_structure(2, 2), {{Expr(0.5)}, {Expr(-2.0)}});
    for (const auto& a : curvature(flat, q))
      for (const auto& b : a)
        for (double v : b) CHECK(v == 0.0);
    const auto F = curvature(u1_plane(), q);
    CHECK(F[0][1][0] == doctest::Approx(1.0));
    CHECK(F[1][0][0] == doctest::Approx(-1.0));
    const GaugeData zero(LieAlgebra::su2(), make_foliation_structure(2, 2),
                         {{Expr(0.0), Expr(0.0), Expr(0.0)}, {Expr(0.0), Expr(0.0), Expr(0.0)}});
    for (const auto& a : curvature(zero, q))
      for (const auto& b : a)
        for (double v : b) CHECK(v == 0.0);
  }

  TEST_CASE("curvature of a non-abelian connection against differences") {
    const auto gd = so3_vanishing();
    const std::vector<double> q{0.6, -0.4};
    const auto F = curvature(gd, q);
    const auto& fr = gd.frame;
    for (int c = 0; c < 3; ++c) {
      auto EA = [&](int i, int j) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a) s += fr.anchor[i][a].eval(q) * oracle::fd(oracle::as_fn(gd.A[j][c]), q, a);
        return s;
      };
      double want = EA(0, 1) - EA(1, 0);
      for (int k = 0; k < 2; ++k) want -= fr.C[0][1][k].eval(q) * gd.A[k][c].eval(q);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) want += gd.algebra.at(a, b, c) * gd.A[0][a].eval(q) * gd.A[1][b].eval(q);
      CHECK(F[0][1][c] == doctest::Approx(want).epsilon(1e-7));
    }
  }

  TEST_CASE("minimal coupling map") {
    const auto gd = u1_plane();
    const GaugePhasePoint pt{{2, 0}, {1, 1}, {3}};
    const auto out = minimal_coupling_map(gd, pt);
    CHECK(out.m[0] == doctest::Approx(1.0));
    CHECK(out.m[1] == doctest::Approx(7.0));
    CHECK(out.O[0] == 3.0);
    const auto back = minimal_coupling_inverse(gd, out);
    CHECK(back.m[1] == doctest::Approx(1.0));
    const GaugePhasePoint neutral{{2, 0}, {1, 1}, {0}};
    CHECK(minimal_coupling_map(gd, neutral).m == neutral.m);
    const GaugeData none(LieAlgebra::u1(), make_foliation_structure(2, 2), {{Expr(0.0)}, {Expr(0.0)}});
    CHECK(minimal_coupling_map(none, pt).m == pt.m);
  }

  TEST_CASE("bivector reduces to the uncoupled structure") {
    const GaugeData none(LieAlgebra::so3(), make_vanishing_structure(),
                         {{Expr(0.0), Expr(0.0), Expr(0.0)}, {Expr(0.0), Expr(0.0), Expr(0.0)}});
    const std::vector<double> y{0.3, 0.7, 0.2, -0.5, 0.4, -0.1, 0.9};
    CHECK((coupled_poisson_bivector(none, y) - uncoupled_poisson_bivector(none, y)).norm() < 1e-14);
    const auto gd = so3_vanishing();
    std::vector<double> y0 = y;
    y0[4] = y0[5] = y0[6] = 0.0;
    CHECK((coupled_poisson_bivector(gd, y0) - uncoupled_poisson_bivector(gd, y0)).norm() < 1e-14);
  }

  TEST_CASE("abelian blocks") {
    const auto gd = u1_plane();
    const std::vector<double> y{0.5, -0.2, 0.3, 0.1, 2.0};
    const Eigen::MatrixXd P = coupled_poisson_bivector(gd, y);
    CHECK(P.block(2, 4, 2, 1).norm() == 0.0);
    CHECK(P(4, 4) == 0.0);
    CHECK(P(2, 3) == doctest::Approx(-2.0));
    CHECK(P(3, 2) == doctest::Approx(2.0));
    CHECK((P + P.transpose()).norm() < 1e-14);
  }

  TEST_CASE("charge block is Lie-Poisson") {
    const GaugeData gd(LieAlgebra::so3(), make_foliation_structure(2, 2),
                       {{Expr(0.3), Expr(-0.1), Expr(0.2)}, {Expr(0.5), Expr(0.4), Expr(-0.6)}});
    const std::vector<double> y{0.5, -0.2, 0.3, 0.1, 0.7, -1.1, 0.4};
    const Eigen::MatrixXd P = coupled_poisson_bivector(gd, y);
    const Eigen::MatrixXd U = uncoupled_poisson_bivector(gd, y);
    CHECK((P.block(4, 4, 3, 3) - U.block(4, 4, 3, 3)).norm() < 1e-14);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double L = 0.0;
        for (int c = 0; c < 3; ++c) L -= gd.algebra.at(a, b, c) * y[static_cast<std::size_t>(4 + c)];
        CHECK(P(4 + a, 4 + b) == doctest::Approx(L));
      }
  }

  TEST_CASE("Jacobi identity of the coupled bracket") {
    CHECK(max_jacobi(u1_plane(), BivectorMutation::none, 1) < 1e-5);
    CHECK(max_jacobi(so3_vanishing(), BivectorMutation::none, 2) < 1e-5);
    CHECK(max_jacobi(so3_vanishing(), BivectorMutation::flip_momentum_charge, 2) > 1e-2);
  }

  TEST_CASE("coupling is a Poisson map") {
    // pull the uncoupled bracket of f o Psi, g o Psi back and compare
    const auto gd = so3_vanishing();
    oracle::Rng rng(12);
    const int N = gd.state_size();
    const oracle::Bracket unc{[gd](std::span<const double> y) { return uncoupled_poisson_bivector(gd, y); },
                              oracle::gauge_rows(gd)};
    const oracle::Bracket cpl{[gd](std::span<const double> y) { return coupled_poisson_bivector(gd, y); },
                              oracle::gauge_rows(gd)};
    auto through = [gd](const oracle::Fn& f) {
      return [gd, f](std::span<const double> x) {
        const GaugePhasePoint p{{x[0], x[1]}, {x[2], x[3]}, {x[4], x[5], x[6]}};
        return f(minimal_coupling_map(gd, p).flat());
      };
    };
    for (int s = 0; s < 3; ++s) {
      std::vector<double> x = oracle::interior_point(gd.frame, rng);
      while (static_cast<int>(x.size()) < N) x.push_back(oracle::uni(rng, -1, 1));
      const oracle::Fn f = oracle::as_fn(oracle::smooth_function(N, rng));
      const oracle::Fn g = oracle::as_fn(oracle::smooth_function(N, rng));
      const double lhs = unc(oracle::numeric(through(f)), oracle::numeric(through(g))).f(x);
      const GaugePhasePoint p{{x[0], x[1]}, {x[2], x[3]}, {x[4], x[5], x[6]}};
      const double rhs = cpl(oracle::numeric(f), oracle::numeric(g)).f(minimal_coupling_map(gd, p).flat());
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }

  TEST_CASE("abelian charge is frozen") {
    const auto gd = u1_plane();
    const std::vector<std::string> nm{"x", "y", "px", "py", "e"};
    const EFunction H = parse_efunction("(px - 0)^2 + py^2 + e^2", nm, {});
    const std::vector<double> y{0.5, -0.2, 0.3, 0.1, 2.0};
    CHECK(wong_field(H, gd, y)[4] == 0.0);
  }
}
