#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "kahler/algebra.hpp"
#include "kahler/expr.hpp"
#include "kahler/point.hpp"
#include "kahler/quadrature.hpp"

namespace kahler {

class SingularOnCurve : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Orientation { Ccw, Cw };

struct Circle {
  Point center;
  double radius = 1.0;
  Orientation orientation = Orientation::Ccw;
};

struct Polyline {
  std::vector<Point> vertices;
  bool closed = false;  // closure is implicit: last vertex joins the first
};

/// Position and velocity at t in [0, 1].
struct Parametric {
  std::function<Point(double)> position;
  std::function<Point(double)> velocity;
  bool closed = false;
  bool reversed = false;
};

/// Position and tangent (d position / dt) on one piece of a curve.
struct CurveSample {
  Point position;
  Point tangent;
};

/// Oriented contour. Construction validates the shape invariants.
class Curve {
 public:
  using Shape = std::variant<Circle, Polyline, Parametric>;

  static Curve circle(Point center, double radius, Orientation orientation = Orientation::Ccw);
  static Curve polyline(std::vector<Point> vertices, bool closed);
  static Curve segment(Point from, Point to);
  static Curve parametric(std::function<Point(double)> position,
                          std::function<Point(double)> velocity, bool closed);

  const Shape& shape() const { return shape_; }
  bool closed() const;
  Point start() const;
  Point end() const;

  /// Seed intervals for quadrature, one or more per piece.
  std::vector<Interval> seed_intervals() const;
  CurveSample sample(std::size_t piece, double t) const;

 private:
  explicit Curve(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;

  friend Curve reverse(const Curve& c);
};

/// Same point set, opposite traversal.
Curve reverse(const Curve& c);

/// Winding number of a closed circle or polyline about p; nullopt for
/// parametric curves. Throws GeometryError when p lies on the curve.
std::optional<int> winding_number(const Curve& c, const Point& p);

/// Euclidean distance from p to the curve's point set (parametric curves are sampled).
double distance_to_curve(const Curve& c, const Point& p);

struct ValuationResult {
  Edif value;
  double abs_error_estimate = 0.0;
  long long integrand_evals = 0;

  friend bool operator==(const ValuationResult&, const ValuationResult&) = default;
};

/// Observer for integrand samples: curve parameter (piece index + local t),
/// position, and field value.
using SampleSink = std::function<void(double t, const Point& at, const Edif& w)>;

/// <f>_c = [int_c f dx] + dxdy [int_c f dy]
///       = int_c (u dx - v dy) + dxdy int_c (u dy + v dx).
/// Throws SingularOnCurve for a non-finite integrand sample or a declared pole
/// closer than cfg.min_pole_distance, and BudgetExceeded.
ValuationResult valuation(const Expr& f, const Curve& c, const QuadratureConfig& cfg = {},
                          std::span<const Point> poles = {}, const SampleSink& sink = {});

/// Only int_c f dx = int_c (u dx - v dy), returned as an edif with zero dxdy part.
ValuationResult dx_valuation(const Expr& f, const Curve& c, const QuadratureConfig& cfg = {});

/// Valuation potential U + V dxdy at `target`, integrated along `path` from
/// `base`; pinned to 0 at base. `path` must be open and run base -> target.
Edif valuation_potential(const Expr& f, const Point& base, const Point& target, const Curve& path,
                         const QuadratureConfig& cfg = {});

/// Same, along the straight segment base -> target.
Edif valuation_potential(const Expr& f, const Point& base, const Point& target,
                         const QuadratureConfig& cfg = {});

}  // namespace kahler
