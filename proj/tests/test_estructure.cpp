#include <doctest.h>

#include <vector>

#include "esym/estructure.hpp"
#include "oracles.hpp"

using namespace esym;

namespace {
bool mat_eq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() < 1e-14;
}
}  // namespace

TEST_SUITE("estructure") {
  TEST_CASE("b-structure anchors") {
    const auto f = make_b_structure(2, 1);
    const std::vector<double> q{0.7, -2.0};
    Eigen::MatrixXd want(2, 2);
    want << 0.7, 0, 0, 1;
    CHECK(mat_eq(f.anchor_at(q), want));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) CHECK(f.structure_at(i, j, k, q) == 0.0);

    const auto f1 = make_b_structure(1, 1);
    const std::vector<double> z{0.0};
    CHECK(mat_eq(f1.anchor_at(z), Eigen::MatrixXd::Zero(1, 1)));
    CHECK(anchor_rank(f1, z) == 0);

    const auto f3 = make_b_structure(2, 3);
    const std::vector<double> t{2.0, 0.1};
    want << 8, 0, 0, 1;
    CHECK(mat_eq(f3.anchor_at(t), want));
  }

  TEST_CASE("corner anchors") {
    const auto f = make_corner_structure(3, 2);
    const std::vector<double> q{0.3, -0.4, 5.0};
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
    want.diagonal() << 0.3, -0.4, 1.0;
    CHECK(mat_eq(f.anchor_at(q), want));
    const auto g = make_corner_structure(2, 2);
    const std::vector<double> one{1, 1}, zero{0, 0};
    CHECK(mat_eq(g.anchor_at(one), Eigen::MatrixXd::Identity(2, 2)));
    CHECK(mat_eq(g.anchor_at(zero), Eigen::MatrixXd::Zero(2, 2)));
  }

  TEST_CASE("foliation anchors") {
    const auto f = make_foliation_structure(3, 2);
    const std::vector<double> q{0.1, 0.2, 0.3};
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 3);
    want(0, 0) = want(1, 1) = 1;
    CHECK(mat_eq(f.anchor_at(q), want));
    const auto t = make_foliation_structure(1, 1);
    const std::vector<double> x{4.0};
    CHECK(mat_eq(t.anchor_at(x), Eigen::MatrixXd::Identity(1, 1)));
  }

  TEST_CASE("elliptic structure") {
    const auto f = make_elliptic_structure();
    const std::vector<double> a{1, 0}, o{0, 0}, r{0.3, -0.7};
    CHECK(mat_eq(f.anchor_at(a), Eigen::MatrixXd::Identity(2, 2)));
    CHECK(mat_eq(f.anchor_at(o), Eigen::MatrixXd::Zero(2, 2)));
    CHECK(bracket_residual(f, r, 0, 1) < 1e-8);
    CHECK(oracle::bracket_defect(f, r, 0, 1) < 1e-8);
  }

  TEST_CASE("vanishing structure") {
    const auto f = make_vanishing_structure();
    const std::vector<double> q{0.5, 1.0}, a{2, 0};
    CHECK(bracket_residual(f, q, 0, 1) < 1e-8);
    CHECK(oracle::bracket_defect(f, q, 0, 1) < 1e-8);
    Eigen::MatrixXd want(2, 2);
    want << 2, 0, 0, 2;
    CHECK(mat_eq(f.anchor_at(a), want));
    CHECK(f.structure_at(1, 0, 1, q) == -1.0);
    const std::vector<double> t{1.2, 0.4};
    CHECK(jacobi_residual(f, t, 0, 1, 0) < 1e-8);
  }

  TEST_CASE("corrupted structure functions are detected") {
    auto f = make_vanishing_structure();
    f.C[0][1][1] = Expr(0.0);
    f.C[1][0][1] = Expr(0.0);
    const std::vector<double> q{0.5, 1.0};
    CHECK(bracket_residual(f, q, 0, 1) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(oracle::bracket_defect(f, q, 0, 1) == doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("built-in families close and satisfy Jacobi") {
    oracle::Rng rng(11);
    const std::vector<EFrame> frames{make_b_structure(2, 1), make_b_structure(3, 2),
                                     make_corner_structure(3, 2), make_foliation_structure(3, 2),
                                     make_elliptic_structure(), make_vanishing_structure()};
    for (const auto& f : frames) {
      for (int s = 0; s < 5; ++s) {
        const auto q = oracle::interior_point(f, rng);
        for (int i = 0; i < f.p; ++i)
          for (int j = 0; j < f.p; ++j) {
            CHECK(bracket_residual(f, q, i, j) < 1e-8);
            for (int k = 0; k < f.p; ++k) CHECK(jacobi_residual(f, q, i, j, k) < 1e-8);
          }
        CHECK(skew_defect(f, q) == 0.0);
      }
    }
  }

  TEST_CASE("reduced anchor on the boundary") {
    const auto f = make_b_structure(2, 2);
    const std::vector<double> q{0.0, 1.0};
    CHECK(f.sigma[0][0].eval(q) == doctest::Approx(1.0));
  }

  TEST_CASE("custom frame residual flags a missing structure function") {
    // x d/dx and x^2 d/dy: [E1, E2] = 2 x^2 d/dy = 2 E2
    const auto chart = Chart::make("c", {"x", "y"}, {0});
    const std::vector<std::string> names{"x", "y"};
    std::vector<std::vector<Expr>> anchor{{parse("x", names), Expr(0.0)},
                                          {Expr(0.0), parse("x^2", names)}};
    std::vector<std::vector<std::vector<Expr>>> C(2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2, Expr(0.0))));
    C[0][1][1] = Expr(2.0);
    const auto good = make_custom_frame(chart, anchor, C, {{0, 1}});
    const std::vector<double> q{0.4, 0.3};
    CHECK(bracket_residual(good, q, 0, 1) < 1e-8);
    C[0][1][1] = Expr(0.0);
    const auto bad = make_custom_frame(chart, anchor, C, {{0, 1}});
    CHECK(bracket_residual(bad, q, 0, 1) > 0.1);
  }

  TEST_CASE("region checks") {
    const auto f = make_b_structure(2, 1);
    const std::vector<double> q{0.0, 0.0};
    CHECK(f.chart.contains(q));
    const auto ch = Chart::make("disk", {"x", "y"}, {}, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] < 1; });
    const std::vector<double> out{2.0, 0.0};
    CHECK_THROWS_AS(ch.require(out), RegionError);
  }
}
