#include "kahler/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace kahler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCircleSeeds = 8;
constexpr int kParametricSeeds = 4;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  }
  return distance(p, a + t * ab);
}

std::string describe(const Point& p) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << p.x << ", " << p.y << ")";
  return s.str();
}

}  // namespace

Curve Curve::circle(Point center, double radius, Orientation orientation) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !finite(center)) {
    throw GeometryError("circle radius must be positive and finite");
  }
  return Curve(Circle{center, radius, orientation});
}

Curve Curve::polyline(std::vector<Point> vertices, bool closed) {
  if (!std::all_of(vertices.begin(), vertices.end(), finite)) {
    throw GeometryError("polyline vertices must be finite");
  }
  if (closed) {
    if (vertices.size() < 3) {
      throw GeometryError("closed polyline needs at least 3 vertices");
    }
    if (vertices.front() == vertices.back()) {
      throw GeometryError("closed polyline must not repeat its first vertex; closure is implicit");
    }
  } else if (vertices.size() < 2) {
    throw GeometryError("open polyline needs at least 2 vertices");
  }
  return Curve(Polyline{std::move(vertices), closed});
}

Curve Curve::segment(Point from, Point to) { return polyline({from, to}, false); }

Curve Curve::parametric(std::function<Point(double)> position,
                        std::function<Point(double)> velocity, bool closed) {
  if (!position || !velocity) {
    throw GeometryError("parametric curve needs position and velocity");
  }
  return Curve(Parametric{std::move(position), std::move(velocity), closed, false});
}

bool Curve::closed() const {
  return std::visit(Overloaded{[](const Circle&) { return true; },
                               [](const Polyline& p) { return p.closed; },
                               [](const Parametric& p) { return p.closed; }},
                    shape_);
}

Point Curve::start() const {
  return std::visit(
      Overloaded{[](const Circle& c) { return c.center + Point{c.radius, 0.0}; },
                 [](const Polyline& p) { return p.vertices.front(); },
                 [](const Parametric& p) { return p.position(p.reversed ? 1.0 : 0.0); }},
      shape_);
}

Point Curve::end() const {
  return std::visit(
      Overloaded{[](const Circle& c) { return c.center + Point{c.radius, 0.0}; },
                 [](const Polyline& p) { return p.closed ? p.vertices.front() : p.vertices.back(); },
                 [](const Parametric& p) { return p.position(p.reversed ? 0.0 : 1.0); }},
      shape_);
}

std::vector<Interval> Curve::seed_intervals() const {
  std::vector<Interval> seeds;
  std::visit(Overloaded{[&](const Circle&) {
                          for (int k = 0; k < kCircleSeeds; ++k) {
                            seeds.push_back({0, kTwoPi * k / kCircleSeeds,
                                             kTwoPi * (k + 1) / kCircleSeeds});
                          }
                        },
                        [&](const Polyline& p) {
                          const std::size_t n =
                              p.closed ? p.vertices.size() : p.vertices.size() - 1;
                          for (std::size_t i = 0; i < n; ++i) {
                            seeds.push_back({i, 0.0, 1.0});
                          }
                        },
                        [&](const Parametric&) {
                          for (int k = 0; k < kParametricSeeds; ++k) {
                            seeds.push_back({0, static_cast<double>(k) / kParametricSeeds,
                                             static_cast<double>(k + 1) / kParametricSeeds});
                          }
                        }},
             shape_);
  return seeds;
}

CurveSample Curve::sample(std::size_t piece, double t) const {
  return std::visit(
      Overloaded{[&](const Circle& c) {
                   const double sgn = c.orientation == Orientation::Ccw ? 1.0 : -1.0;
                   const double ct = std::cos(t);
                   const double st = std::sin(t);
                   return CurveSample{c.center + Point{c.radius * ct, sgn * c.radius * st},
                                      {-c.radius * st, sgn * c.radius * ct}};
                 },
                 [&](const Polyline& p) {
                   const Point& a = p.vertices[piece];
                   const Point& b = p.vertices[(piece + 1) % p.vertices.size()];
                   const Point d = b - a;
                   return CurveSample{a + t * d, d};
                 },
                 [&](const Parametric& p) {
                   if (p.reversed) {
                     return CurveSample{p.position(1.0 - t), -1.0 * p.velocity(1.0 - t)};
                   }
                   return CurveSample{p.position(t), p.velocity(t)};
                 }},
      shape_);
}

Curve reverse(const Curve& c) {
  return std::visit(
      Overloaded{[](const Circle& k) {
                   Circle r = k;
                   r.orientation =
                       k.orientation == Orientation::Ccw ? Orientation::Cw : Orientation::Ccw;
                   return Curve(r);
                 },
                 [](const Polyline& p) {
                   Polyline r = p;
                   std::reverse(r.vertices.begin(), r.vertices.end());
                   return Curve(r);
                 },
                 [](const Parametric& p) {
                   Parametric r = p;
                   r.reversed = !p.reversed;
                   return Curve(r);
                 }},
      c.shape());
}

std::optional<int> winding_number(const Curve& c, const Point& p) {
  if (!c.closed()) {
    throw GeometryError("winding number needs a closed curve");
  }
  if (const auto* k = std::get_if<Circle>(&c.shape())) {
    const double d = distance(p, k->center);
    if (std::abs(d - k->radius) <= 1e-14 * std::max(1.0, k->radius)) {
      throw GeometryError("point " + describe(p) + " lies on the circle");
    }
    if (d > k->radius) {
      return 0;
    }
    return k->orientation == Orientation::Ccw ? 1 : -1;
  }
  if (const auto* poly = std::get_if<Polyline>(&c.shape())) {
    const auto& v = poly->vertices;
    int wn = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point& a = v[i];
      const Point& b = v[(i + 1) % v.size()];
      if (segment_distance(p, a, b) <= 1e-14 * std::max({1.0, std::abs(p.x), std::abs(p.y)})) {
        throw GeometryError("point " + describe(p) + " lies on the polyline");
      }
      const double cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
      if (a.y <= p.y) {
        if (b.y > p.y && cross > 0.0) {
          ++wn;
        }
      } else if (b.y <= p.y && cross < 0.0) {
        --wn;
      }
    }
    return wn;
  }
  return std::nullopt;
}

double distance_to_curve(const Curve& c, const Point& p) {
  return std::visit(
      Overloaded{[&](const Circle& k) { return std::abs(distance(p, k.center) - k.radius); },
                 [&](const Polyline& poly) {
                   const auto& v = poly.vertices;
                   const std::size_t n = poly.closed ? v.size() : v.size() - 1;
                   double best = std::numeric_limits<double>::infinity();
                   for (std::size_t i = 0; i < n; ++i) {
                     best = std::min(best, segment_distance(p, v[i], v[(i + 1) % v.size()]));
                   }
                   return best;
                 },
                 [&](const Parametric& par) {
                   constexpr int kSamples = 4096;
                   double best = std::numeric_limits<double>::infinity();
                   for (int i = 0; i <= kSamples; ++i) {
                     best = std::min(best, distance(p, par.position(static_cast<double>(i) / kSamples)));
                   }
                   return best;
                 }},
      c.shape());
}

namespace {

double sink_parameter(const Curve& c, std::size_t piece, double t) {
  if (std::holds_alternative<Circle>(c.shape())) {
    return t / kTwoPi;
  }
  return static_cast<double>(piece) + t;
}

// Evaluates f on the curve; any failure to produce a finite value is a
// singularity on the contour.
Edif field_on_curve(const Expr& f, const Point& at) {
  Edif w;
  try {
    w = eval_field(f, at);
  } catch (const SingularEvaluation& e) {
    throw SingularOnCurve("integrand singular at " + describe(at) + ": " + e.what());
  } catch (const NonFinite& e) {
    throw SingularOnCurve("integrand not finite at " + describe(at) + ": " + e.what());
  }
  return w;
}

// Pairing of a 1-form a dx + b dy with a tangent vector.
double pair(const Multivector& one_form, const Point& tangent) {
  return one_form.a * tangent.x + one_form.b * tangent.y;
}

void check_poles(const Curve& c, std::span<const Point> poles, double min_distance) {
  if (min_distance <= 0.0) {
    return;
  }
  for (const Point& p : poles) {
    if (distance_to_curve(c, p) <= min_distance) {
      throw SingularOnCurve("declared pole " + describe(p) + " is within " +
                            std::to_string(min_distance) + " of the contour");
    }
  }
}

}  // namespace

ValuationResult valuation(const Expr& f, const Curve& c, const QuadratureConfig& cfg,
                          std::span<const Point> poles, const SampleSink& sink) {
  cfg.validate();
  check_poles(c, poles, cfg.min_pole_distance);
  const Multivector dx = Multivector::dx();
  const Multivector dy = Multivector::dy();
  const PieceIntegrand integrand = [&](std::size_t piece, double t) {
    const CurveSample s = c.sample(piece, t);
    if (!finite(s.position) || !finite(s.tangent)) {
      throw SingularOnCurve("curve parametrization not finite");
    }
    const Edif w = field_on_curve(f, s.position);
    if (sink) {
      sink(sink_parameter(c, piece, t), s.position, w);
    }
    const Multivector wm = w.to_multivector();
    const Edif r{pair(wm * dx, s.tangent), pair(wm * dy, s.tangent)};
    if (!r.is_finite()) {
      throw SingularOnCurve("integrand not finite at " + describe(s.position));
    }
    return r;
  };
  const auto seeds = c.seed_intervals();
  const QuadratureResult q = adaptive_integrate(seeds, integrand, cfg);
  return {q.value, q.abs_error, q.evals};
}

ValuationResult dx_valuation(const Expr& f, const Curve& c, const QuadratureConfig& cfg) {
  cfg.validate();
  const Multivector dx = Multivector::dx();
  const PieceIntegrand integrand = [&](std::size_t piece, double t) {
    const CurveSample s = c.sample(piece, t);
    const Edif w = field_on_curve(f, s.position);
    const double r = pair(w.to_multivector() * dx, s.tangent);
    if (!std::isfinite(r)) {
      throw SingularOnCurve("integrand not finite at " + describe(s.position));
    }
    return Edif{r, 0.0};
  };
  const auto seeds = c.seed_intervals();
  const QuadratureResult q = adaptive_integrate(seeds, integrand, cfg);
  return {q.value, q.abs_error, q.evals};
}

Edif valuation_potential(const Expr& f, const Point& base, const Point& target, const Curve& path,
                         const QuadratureConfig& cfg) {
  if (path.closed()) {
    throw GeometryError("potential path must be open");
  }
  const double scale = std::max({1.0, std::abs(base.x), std::abs(base.y), std::abs(target.x),
                                 std::abs(target.y)});
  const double slack = 1e-12 * scale;
  if (distance(path.start(), base) > slack || distance(path.end(), target) > slack) {
    throw GeometryError("potential path must run from " + describe(base) + " to " +
                        describe(target));
  }
  return valuation(f, path, cfg).value;
}

Edif valuation_potential(const Expr& f, const Point& base, const Point& target,
                         const QuadratureConfig& cfg) {
  if (base == target) {
    return Edif{};
  }
  return valuation_potential(f, base, target, Curve::segment(base, target), cfg);
}

}  // namespace kahler
