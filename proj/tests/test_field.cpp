#include <cmath>

#include "doctest.h"
#include "kahler/field.hpp"
#include "support/random_expr.hpp"
#include "support/test_helpers.hpp"

using namespace kahler;
using kahler::testing::Rng;

TEST_CASE("default step scales with the point") {
  CHECK(default_step({0.1, 0.2}) == doctest::Approx(std::cbrt(2.220446049250313e-16)));
  CHECK(default_step({-40.0, 3.0}) == doctest::Approx(40.0 * std::cbrt(2.220446049250313e-16)));
}

TEST_CASE("Kähler derivative of shedifs vanishes") {
  const Multivector d = kahler_derivative(parse_expr("z^2"), {0.7, -0.3});
  CHECK(std::abs(d.a) <= 1e-9);
  CHECK(std::abs(d.b) <= 1e-9);
  CHECK(d.s == 0.0);
  CHECK(d.p == 0.0);
  const Multivector inv = kahler_derivative(parse_expr("1/z"), {0.0, 1.0});
  CHECK(norm(inv) <= 1e-9);
}

TEST_CASE("Kähler derivative of a raw field") {
  // u = x^2, v = 0: u,x = 2x and all other partials vanish
  const Expr f = Expr::raw_field(parse_component("x^2"), parse_component("0"));
  const Multivector d = kahler_derivative(f, {1.0, 0.0});
  CHECK(d.a == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(d.b) <= 1e-12);

  // u = x y, v = x: d splits into du = y dx + x dy and delta(v dxdy) = dy
  const Expr g = Expr::raw_field(parse_component("x*y"), parse_component("x"));
  const KahlerParts parts = kahler_derivative_parts(g, {2.0, 3.0});
  CHECK(parts.exterior.a == doctest::Approx(3.0));
  CHECK(parts.exterior.b == doctest::Approx(2.0));
  CHECK(std::abs(parts.interior.a) <= 1e-12);
  CHECK(parts.interior.b == doctest::Approx(1.0));
  const Multivector total = kahler_derivative(g, {2.0, 3.0});
  CHECK(norm(total - parts.total()) <= 1e-12);
}

TEST_CASE("strict harmonicity on grids") {
  const auto grid = grid_samples(-1, 1, -1, 1, 5);
  CHECK(grid.size() == 25);
  CHECK(grid.front() == Point{-1, -1});
  CHECK(grid.back() == Point{1, 1});

  CHECK(is_strict_harmonic(parse_expr("exp(z)"), grid, 1e-6).strict_harmonic);
  CHECK(is_strict_harmonic(parse_expr("z^2 + 3*z + 1"), grid).strict_harmonic);

  const Expr raw = Expr::raw_field(parse_component("x"), parse_component("0"));
  const HarmonicReport r = is_strict_harmonic(raw, grid, 1e-6);
  CHECK_FALSE(r.strict_harmonic);
  for (const Point& p : grid) {
    const CrResidual c = cr_residual(raw, p);
    CHECK(c.r1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(c.r2) <= 1e-12);
  }
  CHECK(r.worst.r1 == doctest::Approx(1.0).epsilon(1e-9));

  // the stencil lands on the pole
  CHECK_THROWS_AS(cr_residual(parse_expr("1/(z - 0.5)"), {0.0, 0.0}, 0.5), SingularEvaluation);
}

TEST_CASE("random compositions of elementary functions are shedifs") {
  Rng rng(31);
  int expressions = 0;
  while (expressions < 100) {
    const Expr f = testing::random_expr(rng, 5);
    std::vector<Point> samples;
    for (int tries = 0; tries < 60 && samples.size() < 5; ++tries) {
      const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      if (testing::is_regular_point(f, p)) {
        samples.push_back(p);
      }
    }
    if (samples.empty()) {
      continue;
    }
    const HarmonicReport r = is_strict_harmonic(f, samples, 1e-6);
    CHECK_MESSAGE(r.strict_harmonic, render(f) << " residual " << r.worst.magnitude());
    ++expressions;
  }
}

TEST_CASE("co-valuation forms") {
  const Covaluation c = covaluation(parse_expr("z^3"), {0.5, 0.25});
  CHECK(c.forms_agree);
  // 3 z^2 at 0.5 + 0.25 dxdy
  const Edif want{3 * (0.25 - 0.0625), 3 * 2 * 0.5 * 0.25};
  CHECK(distance(c.from_dv_dy, want) <= 1e-8);
  CHECK(distance(c.from_du_dx, want) <= 1e-8);

  const Covaluation raw = covaluation(Expr::raw_field(parse_component("x"), parse_component("0")),
                                      {0.0, 0.0});
  CHECK_FALSE(raw.forms_agree);
}
