#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

#include "kahler/algebra.hpp"

namespace kahler {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long long max_evals = 1'000'000;
  double min_pole_distance = 0.0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Parameter interval [a, b] on piece `piece` of a piecewise-parametrized path.
struct Interval {
  std::size_t piece = 0;
  double a = 0.0;
  double b = 0.0;
};

struct QuadratureResult {
  Edif value;
  double abs_error = 0.0;
  long long evals = 0;
};

/// Edif-valued integrand evaluated at parameter t of a piece.
using PieceIntegrand = std::function<Edif(std::size_t piece, double t)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature over the seed intervals.
/// The interval with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol * |value|). Intervals whose estimate is
/// at rounding level are retired. Partial results are summed in (piece, a)
/// order, so results are reproducible bit for bit.
/// Throws BudgetExceeded when max_evals would be exceeded.
QuadratureResult adaptive_integrate(std::span<const Interval> seeds, const PieceIntegrand& f,
                                    const QuadratureConfig& cfg);

/// Kronrod and embedded Gauss estimates of one interval.
struct RuleEstimate {
  Edif kronrod;
  Edif gauss;
  double abs_integral = 0.0;  // integral of |f|, for the rounding floor
};

RuleEstimate gauss_kronrod21(const std::function<Edif(double)>& f, double a, double b);

}  // namespace kahler
