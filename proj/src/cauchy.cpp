#include "kahler/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace kahler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(const Point& p) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << p.x << ", " << p.y << ")";
  return s.str();
}

void require_closed(const Curve& c) {
  if (!c.closed()) {
    throw GeometryError("a closed curve is required");
  }
}

// Winding number of c about z0, which must be strictly enclosed. Parametric
// curves cannot be checked and count as enclosing z0 once.
int enclosing_winding(const Curve& c, const Point& z0) {
  require_closed(c);
  std::optional<int> w;
  try {
    w = winding_number(c, z0);
  } catch (const GeometryError& e) {
    throw PoleOnOrOutside(e.what());
  }
  if (!w) {
    return 1;
  }
  if (*w == 0) {
    throw PoleOnOrOutside("point " + describe(z0) + " is not enclosed by the curve");
  }
  return *w;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) {
    r *= k;
  }
  return r;
}

// Orientation shared by the inner circles of a decomposition.
Orientation outer_orientation(const Curve& outer, std::span<const PoleSpec> poles) {
  if (const auto* k = std::get_if<Circle>(&outer.shape())) {
    return k->orientation;
  }
  if (const auto* poly = std::get_if<Polyline>(&outer.shape())) {
    double area2 = 0.0;
    const auto& v = poly->vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point& a = v[i];
      const Point& b = v[(i + 1) % v.size()];
      area2 += a.x * b.y - b.x * a.y;
    }
    return area2 >= 0.0 ? Orientation::Ccw : Orientation::Cw;
  }
  (void)poles;
  return Orientation::Ccw;
}

}  // namespace

Edif divide_by_two_pi_dxdy(const Edif& w) { return Edif{0.0, -1.0 / kTwoPi} * w; }

Expr kernel_expr(const Point& z0, int n) {
  if (n < 0) {
    throw std::invalid_argument("kernel order n must be non-negative");
  }
  return Expr::int_pow(Expr::z() - Expr::constant(z0.to_edif()), -(n + 1));
}

double goursat_residual(const Expr& f, const Curve& c, const QuadratureConfig& cfg) {
  require_closed(c);
  return modulus(valuation(f, c, cfg).value);
}

ValuationResult kernel_valuation(const Point& z0, int n, const Curve& c,
                                 const QuadratureConfig& cfg) {
  enclosing_winding(c, z0);
  const Point pole[] = {z0};
  return valuation(kernel_expr(z0, n), c, cfg, pole);
}

ValuationResult dx_only_integral(const Expr& f, const Point& z0, const Curve& c,
                                 const QuadratureConfig& cfg) {
  require_closed(c);
  return dx_valuation(f / (Expr::z() - Expr::constant(z0.to_edif())), c, cfg);
}

CauchyResult cauchy_value(const Expr& f, const Point& z0, const Curve& c,
                          const QuadratureConfig& cfg) {
  return cauchy_derivative(f, z0, 0, c, cfg);
}

CauchyResult cauchy_derivative(const Expr& f, const Point& z0, int n, const Curve& c,
                               const QuadratureConfig& cfg) {
  if (n < 0) {
    throw std::invalid_argument("derivative order must be non-negative");
  }
  const int winding = enclosing_winding(c, z0);
  const Expr integrand = f * kernel_expr(z0, n);
  const Point pole[] = {z0};
  const ValuationResult v = valuation(integrand, c, cfg, pole);
  const double scale = factorial(n) / winding;
  CauchyResult r;
  r.value = Edif{scale} * divide_by_two_pi_dxdy(v.value);
  r.error_estimate = std::abs(scale) * v.abs_error_estimate / kTwoPi;
  r.winding = winding;
  return r;
}

double default_residue_radius(const Point& pole, std::span<const PoleSpec> others) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const PoleSpec& o : others) {
    const double d = distance(pole, o.location);
    if (d > 0.0) {
      nearest = std::min(nearest, d);
    }
  }
  return std::min(1.0, 0.5 * nearest);
}

ResidueReport residue(const Expr& f, const PoleSpec& pole, double radius,
                      const QuadratureConfig& cfg) {
  if (pole.order_hint && *pole.order_hint < 1) {
    throw std::invalid_argument("pole order hint must be at least 1");
  }
  const Curve circle = Curve::circle(pole.location, radius, Orientation::Ccw);
  const Point where[] = {pole.location};
  const ValuationResult v = valuation(f, circle, cfg, where);
  return {pole, divide_by_two_pi_dxdy(v.value), radius, v.abs_error_estimate / kTwoPi};
}

std::vector<ResidueReport> residues(const Expr& f, std::span<const PoleSpec> poles,
                                    const QuadratureConfig& cfg) {
  std::vector<ResidueReport> out;
  out.reserve(poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i) {
    std::vector<PoleSpec> others;
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (j != i) {
        others.push_back(poles[j]);
      }
    }
    out.push_back(residue(f, poles[i], default_residue_radius(poles[i].location, others), cfg));
  }
  return out;
}

Decomposition decompose_valuation(const Expr& f, const Curve& outer,
                                  std::span<const PoleSpec> poles, std::span<const double> radii,
                                  const QuadratureConfig& cfg) {
  require_closed(outer);
  if (poles.size() != radii.size()) {
    throw std::invalid_argument("decomposition needs one radius per pole");
  }
  const Orientation orientation = outer_orientation(outer, poles);
  const auto* outer_circle = std::get_if<Circle>(&outer.shape());
  const bool checkable = outer_circle != nullptr || std::holds_alternative<Polyline>(outer.shape());
  std::vector<Curve> circles;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const Point& c = poles[i].location;
    const double r = radii[i];
    circles.push_back(Curve::circle(c, r, orientation));
    if (checkable) {
      const auto w = winding_number(outer, c);
      if (w && *w == 0) {
        throw GeometryError("pole " + describe(c) + " is outside the outer curve");
      }
      const bool inside = outer_circle != nullptr
                              ? distance(c, outer_circle->center) + r < outer_circle->radius
                              : distance_to_curve(outer, c) > r;
      if (!inside) {
        throw GeometryError("circle about " + describe(c) + " leaves the outer curve");
      }
    }
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (j == i) {
        continue;
      }
      const double d = distance(c, poles[j].location);
      if (d <= r) {
        throw GeometryError("circle about " + describe(c) + " encloses another pole");
      }
      if (j > i && d <= r + radii[j]) {
        throw GeometryError("circles about " + describe(c) + " and " +
                            describe(poles[j].location) + " overlap");
      }
    }
  }

  std::vector<Point> locations;
  for (const PoleSpec& p : poles) {
    locations.push_back(p.location);
  }
  Decomposition d;
  d.outer = valuation(f, outer, cfg, locations);
  d.lhs = d.outer.value;
  d.error_budget = d.outer.abs_error_estimate;
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const Point where[] = {poles[i].location};
    d.circles.push_back(valuation(f, circles[i], cfg, where));
    d.rhs = d.rhs + d.circles.back().value;
    d.error_budget += d.circles.back().abs_error_estimate;
  }
  d.agrees = distance(d.lhs, d.rhs) <= d.error_budget;
  return d;
}

std::vector<double> continuity_limit_check(const Expr& f, const Point& z0,
                                           std::span<const double> radii,
                                           const QuadratureConfig& cfg) {
  const Edif f0 = eval_field(f, z0);
  const Expr quotient =
      (f - Expr::constant(f0)) / (Expr::z() - Expr::constant(z0.to_edif()));
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    out.push_back(modulus(valuation(quotient, Curve::circle(z0, r), cfg).value));
  }
  return out;
}

CovaluationResiduals covaluation_roundtrip(const Expr& f, const Curve& c,
                                           const QuadratureConfig& cfg) {
  if (c.closed()) {
    throw GeometryError("co-valuation round trip needs an open curve");
  }
  const Point base = c.start();
  const Point target = c.end();
  const Edif at_target = valuation_potential(f, base, target, c, cfg);

  // Potential at target + s (s along x): the path c extended by a short segment.
  const auto shifted = [&](double s) {
    return at_target + valuation(f, Curve::segment(target, target + Point{s, 0.0}), cfg).value;
  };
  const double h = 1e-3 * std::max({1.0, std::abs(target.x), std::abs(target.y)});
  const Edif d_dx = Edif{1.0 / (12.0 * h)} *
                    (Edif{-1.0} * shifted(2.0 * h) + Edif{8.0} * shifted(h) -
                     Edif{8.0} * shifted(-h) + shifted(-2.0 * h));
  const Edif f_target = eval_field(f, target);
  const Edif f_base = eval_field(f, base);

  CovaluationResiduals r;
  r.residual1 = distance(d_dx, f_target);
  const Edif of_derivative = valuation(differentiate(f), c, cfg).value;
  r.residual2 = modulus(of_derivative - f_target + f_base);
  return r;
}

}  // namespace kahler
