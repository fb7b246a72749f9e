#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kahler/algebra.hpp"
#include "kahler/expr.hpp"
#include "kahler/point.hpp"

namespace kahler {

/// Default central-difference step at a point: cbrt(eps) * max(1, |x|, |y|).
double default_step(const Point& at);

/// Partial derivatives of u and v at a point, by second-order central differences.
struct FieldGradient {
  double u_x = 0.0;
  double u_y = 0.0;
  double v_x = 0.0;
  double v_y = 0.0;
};

FieldGradient field_gradient(const Expr& f, const Point& at, std::optional<double> h = std::nullopt);

/// Any edif-valued field on the plane, e.g. a valuation potential.
using FieldFn = std::function<Edif(const Point&)>;

FieldGradient field_gradient(const FieldFn& f, const Point& at,
                             std::optional<double> h = std::nullopt);

/// The two pieces of the Kähler derivative of an edif field.
struct KahlerParts {
  Multivector exterior;  // d w = du
  Multivector interior;  // delta w = delta(v dxdy)
  Multivector total() const { return exterior + interior; }
};

KahlerParts kahler_derivative_parts(const Expr& f, const Point& at,
                                    std::optional<double> h = std::nullopt);

/// (dx d/dx + dy d/dy) w = (u_x - v_y) dx + (u_y + v_x) dy.
Multivector kahler_derivative(const Expr& f, const Point& at,
                              std::optional<double> h = std::nullopt);

/// Cauchy-Riemann residuals r1 = u_x - v_y, r2 = u_y + v_x.
struct CrResidual {
  double r1 = 0.0;
  double r2 = 0.0;
  Point at;

  double magnitude() const;
};

CrResidual cr_residual(const Expr& f, const Point& at, std::optional<double> h = std::nullopt);
CrResidual cr_residual(const FieldFn& f, const Point& at, std::optional<double> h = std::nullopt);

struct HarmonicReport {
  bool strict_harmonic = false;
  CrResidual worst;
};

inline constexpr double kDefaultHarmonicTol = 1e-6;

/// Sample-based strict-harmonicity test: every residual magnitude <= tol.
HarmonicReport is_strict_harmonic(const Expr& f, std::span<const Point> samples,
                                  double tol = kDefaultHarmonicTol);
HarmonicReport is_strict_harmonic(const FieldFn& f, std::span<const Point> samples,
                                  double tol = kDefaultHarmonicTol);

/// n x n grid over [x0, x1] x [y0, y1], row-major from (x0, y0).
std::vector<Point> grid_samples(double x0, double x1, double y0, double y1, int n);

/// Co-valuation d w / d x computed numerically in both written forms:
/// from dv dy = v_y + v_x dxdy and from du dx = u_x - u_y dxdy.
/// The two agree only where the Cauchy-Riemann relations hold.
struct Covaluation {
  Edif from_dv_dy;
  Edif from_du_dx;
  bool forms_agree = false;
};

Covaluation covaluation(const Expr& f, const Point& at, double tol = kDefaultHarmonicTol);

}  // namespace kahler
