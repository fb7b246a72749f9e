#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kahler/algebra.hpp"
#include "kahler/contour.hpp"
#include "kahler/expr.hpp"
#include "kahler/point.hpp"

namespace kahler {

/// The interior point is on the curve or not enclosed by it.
class PoleOnOrOutside : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

struct PoleSpec {
  Point location;
  std::optional<int> order_hint;  // >= 1 when present; never inferred
};

struct ResidueReport {
  PoleSpec pole;
  Edif residue;
  double circle_radius = 0.0;
  double error_estimate = 0.0;
};

/// Result of a valuation rescaled by (2 pi dxdy)^{-1}.
struct CauchyResult {
  Edif value;
  double error_estimate = 0.0;
  int winding = 1;
};

/// Multiplication by (2 pi dxdy)^{-1} = -dxdy / (2 pi).
Edif divide_by_two_pi_dxdy(const Edif& w);

/// (z - z0)^{-(n+1)}.
Expr kernel_expr(const Point& z0, int n);

/// |<f>_c|; vanishes for shedifs regular on and inside c.
double goursat_residual(const Expr& f, const Curve& c, const QuadratureConfig& cfg = {});

/// <(z - z0)^{-(n+1)}>_c: 2 pi dxdy times the winding number for n = 0, else 0.
ValuationResult kernel_valuation(const Point& z0, int n, const Curve& c,
                                 const QuadratureConfig& cfg = {});

/// int_c f(z) / (z - z0) dx alone: the scalar part of the valuation.
ValuationResult dx_only_integral(const Expr& f, const Point& z0, const Curve& c,
                                 const QuadratureConfig& cfg = {});

/// f(z0) = (2 pi dxdy)^{-1} <f(z) / (z - z0)>_c, divided by the winding number
/// of c about z0. Throws PoleOnOrOutside when z0 is on or outside c.
CauchyResult cauchy_value(const Expr& f, const Point& z0, const Curve& c,
                          const QuadratureConfig& cfg = {});

/// n-th derivative: n! (2 pi dxdy)^{-1} <f(z) / (z - z0)^{n+1}>_c.
CauchyResult cauchy_derivative(const Expr& f, const Point& z0, int n, const Curve& c,
                               const QuadratureConfig& cfg = {});

/// Half the distance to the nearest other pole, capped at 1.
double default_residue_radius(const Point& pole, std::span<const PoleSpec> others);

/// (2 pi dxdy)^{-1} <f> over the ccw circle of `radius` about the pole.
ResidueReport residue(const Expr& f, const PoleSpec& pole, double radius,
                      const QuadratureConfig& cfg = {});

/// Residues at every pole, each on its default-radius circle.
std::vector<ResidueReport> residues(const Expr& f, std::span<const PoleSpec> poles,
                                    const QuadratureConfig& cfg = {});

struct Decomposition {
  ValuationResult outer;
  std::vector<ValuationResult> circles;  // pole-list order
  Edif lhs;
  Edif rhs;
  double error_budget = 0.0;  // summed quadrature error estimates
  bool agrees = false;        // |lhs - rhs| <= error_budget
};

/// <f>_C against the sum of valuations over equally oriented circles, one per
/// pole. Throws GeometryError when circles overlap, leave C, or enclose more
/// than one declared pole.
Decomposition decompose_valuation(const Expr& f, const Curve& outer,
                                  std::span<const PoleSpec> poles, std::span<const double> radii,
                                  const QuadratureConfig& cfg = {});

/// |<(f(z) - f(z0)) / (z - z0)>| on ccw circles of each radius about z0.
std::vector<double> continuity_limit_check(const Expr& f, const Point& z0,
                                           std::span<const double> radii,
                                           const QuadratureConfig& cfg = {});

struct CovaluationResiduals {
  double residual1 = 0.0;  // |d/dx <f> - f| at the end point
  double residual2 = 0.0;  // |<df/dx> - f + f(base)| at the end point
};

/// Checks that valuation and co-valuation undo each other along an open curve.
CovaluationResiduals covaluation_roundtrip(const Expr& f, const Curve& c,
                                           const QuadratureConfig& cfg = {});

}  // namespace kahler
