#include "kahler/field.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace kahler {

double default_step(const Point& at) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max({1.0, std::abs(at.x), std::abs(at.y)});
}

FieldGradient field_gradient(const Expr& f, const Point& at, std::optional<double> h) {
  return field_gradient([&f](const Point& p) { return eval_field(f, p); }, at, h);
}

FieldGradient field_gradient(const FieldFn& f, const Point& at, std::optional<double> h) {
  const double step = h.value_or(default_step(at));
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  const Edif px = f({at.x + step, at.y});
  const Edif mx = f({at.x - step, at.y});
  const Edif py = f({at.x, at.y + step});
  const Edif my = f({at.x, at.y - step});
  const double inv = 1.0 / (2.0 * step);
  return {(px.u - mx.u) * inv, (py.u - my.u) * inv, (px.v - mx.v) * inv, (py.v - my.v) * inv};
}

KahlerParts kahler_derivative_parts(const Expr& f, const Point& at, std::optional<double> h) {
  const FieldGradient g = field_gradient(f, at, h);
  // w,x and w,y as multivectors; the operator acts by left Clifford
  // multiplication with dx and dy.
  const Multivector wx{g.u_x, 0.0, 0.0, g.v_x};
  const Multivector wy{g.u_y, 0.0, 0.0, g.v_y};
  const Multivector dx = Multivector::dx();
  const Multivector dy = Multivector::dy();
  return {wedge(dx, wx) + wedge(dy, wy), inner(dx, wx) + inner(dy, wy)};
}

namespace {

Multivector apply_operator(const FieldGradient& g) {
  const Multivector wx{g.u_x, 0.0, 0.0, g.v_x};
  const Multivector wy{g.u_y, 0.0, 0.0, g.v_y};
  return Multivector::dx() * wx + Multivector::dy() * wy;
}

}  // namespace

Multivector kahler_derivative(const Expr& f, const Point& at, std::optional<double> h) {
  return apply_operator(field_gradient(f, at, h));
}

double CrResidual::magnitude() const { return std::hypot(r1, r2); }

CrResidual cr_residual(const Expr& f, const Point& at, std::optional<double> h) {
  const Multivector d = kahler_derivative(f, at, h);
  return {d.a, d.b, at};
}

CrResidual cr_residual(const FieldFn& f, const Point& at, std::optional<double> h) {
  const Multivector d = apply_operator(field_gradient(f, at, h));
  return {d.a, d.b, at};
}

HarmonicReport is_strict_harmonic(const Expr& f, std::span<const Point> samples, double tol) {
  return is_strict_harmonic([&f](const Point& p) { return eval_field(f, p); }, samples, tol);
}

HarmonicReport is_strict_harmonic(const FieldFn& f, std::span<const Point> samples, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("harmonicity tolerance must be positive");
  }
  HarmonicReport report;
  report.strict_harmonic = true;
  double worst = -1.0;
  for (const Point& p : samples) {
    const CrResidual r = cr_residual(f, p);
    const double m = r.magnitude();
    if (!std::isfinite(m)) {
      throw NonFinite("non-finite Cauchy-Riemann residual");
    }
    if (m > worst) {
      worst = m;
      report.worst = r;
    }
    if (m > tol) {
      report.strict_harmonic = false;
    }
  }
  return report;
}

std::vector<Point> grid_samples(double x0, double x1, double y0, double y1, int n) {
  if (n < 1) {
    throw std::invalid_argument("grid needs at least one point per side");
  }
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const auto coord = [n](double a, double b, int i) {
    return n == 1 ? 0.5 * (a + b) : a + (b - a) * static_cast<double>(i) / (n - 1);
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      pts.push_back({coord(x0, x1, i), coord(y0, y1, j)});
    }
  }
  return pts;
}

Covaluation covaluation(const Expr& f, const Point& at, double tol) {
  const FieldGradient g = field_gradient(f, at);
  Covaluation c;
  c.from_dv_dy = {g.v_y, g.v_x};
  c.from_du_dx = {g.u_x, -g.u_y};
  c.forms_agree = distance(c.from_dv_dy, c.from_du_dx) <= tol;
  if (!c.forms_agree) {
    std::cerr << "warning: co-valuation forms disagree at (" << at.x << ", " << at.y
              << "); the field is not strict harmonic there\n";
  }
  return c;
}

}  // namespace kahler
