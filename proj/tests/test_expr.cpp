#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "kahler/expr.hpp"
#include "support/complex_oracle.hpp"
#include "support/random_expr.hpp"
#include "support/test_helpers.hpp"

using namespace kahler;
using kahler::testing::close_rel;
using kahler::testing::Rng;

TEST_CASE("parse shapes") {
  const Expr sq = parse_expr("z^2");
  CHECK(sq.kind() == NodeKind::IntPow);
  CHECK(sq.int_exponent() == 2);
  CHECK(sq.children()[0].kind() == NodeKind::Variable);

  const Expr eq25 = parse_expr("1/(z*(z - pi/2))");
  REQUIRE(eq25.kind() == NodeKind::Div);
  CHECK(eq25.children()[0].value() == Edif{1.0});
  const Expr prod = eq25.children()[1];
  REQUIRE(prod.kind() == NodeKind::Mul);
  CHECK(prod.children()[0].kind() == NodeKind::Variable);
  const Expr shift = prod.children()[1];
  REQUIRE(shift.kind() == NodeKind::Sub);
  CHECK(shift.children()[1].value() == Edif{std::numbers::pi / 2});

  const Expr eq35 = parse_expr("1/(z^2+1)^2");
  REQUIRE(eq35.kind() == NodeKind::Div);
  const Expr outer = eq35.children()[1];
  REQUIRE(outer.kind() == NodeKind::IntPow);
  CHECK(outer.int_exponent() == 2);
  const Expr sum = outer.children()[0];
  REQUIRE(sum.kind() == NodeKind::Add);
  CHECK(sum.children()[0].kind() == NodeKind::IntPow);
  CHECK(sum.children()[1].value() == Edif{1.0});
}

TEST_CASE("parse details") {
  CHECK(parse_expr("I").value() == Edif::unit());
  CHECK(parse_expr("2.5e-1").value() == Edif{0.25});
  CHECK(parse_expr(" - 3 ").value() == Edif{-3.0});
  CHECK(parse_expr("-z^2").kind() == NodeKind::Negate);
  CHECK(parse_expr("z^-2").int_exponent() == -2);
  CHECK(parse_expr("z^(-2)").int_exponent() == -2);
  CHECK(parse_expr("z^0.5").kind() == NodeKind::RealPow);
  CHECK(parse_expr("z^2.0").kind() == NodeKind::IntPow);
  CHECK(parse_expr("cosh(z)").function() == Elementary::Cosh);
  CHECK(parse_expr("2*I").value() == Edif{0.0, 2.0});
  CHECK(parse_component("x^2 - y").kind() == NodeKind::Sub);
}

TEST_CASE("parse errors carry position and expected tokens") {
  auto expect_error = [](const char* text, std::size_t pos) {
    try {
      parse_expr(text);
      FAIL("no parse error for " << text);
    } catch (const ParseError& e) {
      CHECK(e.position() == pos);
      CHECK_FALSE(e.expected().empty());
    }
  };
  expect_error("z +", 3);
  expect_error("(z", 2);
  expect_error("foo(z)", 0);
  expect_error("z ^ z", 4);
  expect_error("2 $ z", 2);
  expect_error("x + 1", 0);  // coordinates are not part of the z grammar
  expect_error("z z", 2);
  CHECK_THROWS_AS(parse_component("z"), ParseError);
}

TEST_CASE("eval_field examples") {
  CHECK(eval_field(parse_expr("z"), {2, 3}) == Edif{2, 3});
  CHECK(eval_field(parse_expr("z^2"), {2, 1}) == Edif{3, 4});
  CHECK(eval_field(parse_expr("1/z"), {0, 1}) == Edif{0, -1});
  CHECK_THROWS_AS(eval_field(parse_expr("1/z"), {0, 0}), SingularEvaluation);
  CHECK_THROWS_AS(eval_field(parse_expr("log(z)"), {0, 0}), SingularEvaluation);
  CHECK_THROWS_AS(eval_field(parse_expr("exp(exp(z))"), {7, 0}), NonFinite);
  const Expr raw = Expr::raw_field(parse_component("x^2"), parse_component("3*y"));
  CHECK(eval_field(raw, {2, 5}) == Edif{4, 15});
}

TEST_CASE("eval_field matches the complex oracle") {
  Rng rng(21);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Expr f = testing::random_expr(rng, 5);
    const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (!testing::is_regular_point(f, p)) {
      continue;
    }
    CHECK(close_rel(eval_field(f, p), oracle::eval_complex(f, {p.x, p.y}), 1e-10));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("evaluation is deterministic and render round-trips bit for bit") {
  Rng rng(22);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Expr f = testing::random_expr(rng, 5);
    const Expr g = parse_expr(render(f));
    for (int k = 0; k < 3; ++k) {
      const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      Edif a;
      try {
        a = eval_field(f, p);
      } catch (const std::exception&) {
        CHECK_THROWS(eval_field(g, p));
        continue;
      }
      const Edif b = eval_field(g, p);
      CHECK(a == b);
      CHECK(eval_field(f, p) == a);
      ++checked;
    }
  }
  CHECK(checked > 200);
  CHECK_THROWS_AS(render(Expr::raw_field(Expr::coord_x(), Expr::coord_y())), std::invalid_argument);
}

TEST_CASE("symbolic derivative examples") {
  const Expr dz = differentiate(parse_expr("z"));
  CHECK(dz.kind() == NodeKind::Constant);
  CHECK(dz.value() == Edif{1.0});
  CHECK(eval_field(differentiate(parse_expr("z^3")), {0.5, 0}) == Edif{0.75});
  const Expr e = parse_expr("exp(z)");
  const Expr de = differentiate(e);
  CHECK(render(de) == render(e));
  CHECK(eval_field(differentiate(parse_expr("z^3"), 2), {0.5, 0}) == Edif{3.0});
  CHECK_THROWS_AS(differentiate(Expr::raw_field(Expr::coord_x(), Expr::coord_y())),
                  NotDifferentiable);
}

TEST_CASE("symbolic derivative agrees with finite differences") {
  Rng rng(23);
  int checked = 0;
  while (checked < 100) {
    const Expr f = testing::random_expr(rng, 4);
    const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (!testing::is_regular_point(f, p)) {
      continue;
    }
    const double h = 1e-4;
    // fourth-order central difference in x
    const Edif fd = Edif{1.0 / (12 * h)} *
                    (eval_field(f, {p.x - 2 * h, p.y}) - Edif{8.0} * eval_field(f, {p.x - h, p.y}) +
                     Edif{8.0} * eval_field(f, {p.x + h, p.y}) - eval_field(f, {p.x + 2 * h, p.y}));
    const Edif sym = eval_field(differentiate(f), p);
    CHECK(distance(sym, fd) <= 1e-6 * std::max(1.0, modulus(sym)));
    ++checked;
  }
}
