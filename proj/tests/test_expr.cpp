#include <doctest.h>

#include <cmath>
#include <vector>

#include "esym/expr.hpp"

using namespace esym;

TEST_SUITE("expr") {
  TEST_CASE("parse and evaluate") {
    const std::vector<std::string> names{"x", "y"};
    const Expr e = parse("x^2*sin(y) + 3/x", names);
    const std::vector<double> p{2.0, 0.5};
    CHECK(e.eval(p) == doctest::Approx(4 * std::sin(0.5) + 1.5));
  }

  TEST_CASE("symbolic partials agree with differences") {
    const std::vector<std::string> names{"a", "b", "c"};
    for (const char* s : {"sec(a)^2*tan(b)", "log(abs(a))+exp(b*c)", "sqrt(1+a^2)*cot(c)",
                          "sinc(a)*csc(b)", "(a-b)/(1+c^2)"}) {
      const Expr e = parse(s, names);
      const std::vector<double> p{0.4, 0.9, -0.7};
      CHECK_MESSAGE(check_partials(e, p) < 1e-6, s);
    }
  }

  TEST_CASE("sinc is smooth at the origin") {
    CHECK(sinc_value(0.0) == doctest::Approx(1.0));
    CHECK(dsinc_value(0.0) == doctest::Approx(0.0));
    CHECK(d2sinc_value(0.0) == doctest::Approx(-1.0 / 3.0));
    CHECK(d2sinc_value(1e-4) == doctest::Approx(-1.0 / 3.0).epsilon(1e-6));
  }

  TEST_CASE("malformed input names the text") {
    const std::vector<std::string> names{"x"};
    CHECK_THROWS_AS(parse("x*", names), ParseError);
    CHECK_THROWS_AS(parse("z + 1", names), ParseError);
    CHECK_THROWS_AS(parse("sin(x", names), ParseError);
    try {
      parse("x**", names);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("x**") != std::string::npos);
    }
  }

  TEST_CASE("division by a boundary power") {
    const std::vector<std::string> names{"x", "y"};
    Expr out;
    CHECK(divide_by_power(parse("x^3*y", names), 0, 2, out));
    const std::vector<double> p{1.5, 2.0};
    CHECK(out.eval(p) == doctest::Approx(3.0));
    CHECK_FALSE(divide_by_power(parse("x + y", names), 0, 1, out));
  }
}
