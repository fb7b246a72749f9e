#pragma once

// Random expression trees in z, and a regularity screen for sample points.

#include <cmath>
#include <optional>
#include <vector>

#include "kahler/expr.hpp"
#include "support/test_helpers.hpp"

namespace kahler::testing {

inline Expr random_expr(Rng& rng, int depth) {
  if (depth <= 1 || rng.integer(0, 4) == 0) {
    if (rng.integer(0, 2) == 0) {
      Edif c{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      return Expr::constant(c);
    }
    return Expr::z();
  }
  const int pick = rng.integer(0, 13);
  switch (pick) {
    case 0: return Expr::negate(random_expr(rng, depth - 1));
    case 1: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) / random_expr(rng, depth - 1);
    case 5: {
      int n = rng.integer(-3, 3);
      return Expr::int_pow(random_expr(rng, depth - 1), n);
    }
    default: {
      static constexpr Elementary fns[] = {Elementary::Exp,  Elementary::Log,  Elementary::Sin,
                                           Elementary::Cos,  Elementary::Tan,  Elementary::Sinh,
                                           Elementary::Cosh, Elementary::Sqrt};
      return Expr::apply(fns[rng.integer(0, 7)], random_expr(rng, depth - 1));
    }
  }
}

namespace detail {

// Evaluates while screening each node; returns nullopt when the point is
// close to a pole, a branch cut, or a region of very large values.
inline std::optional<Edif> screened_eval(const Expr& f, const Point& p) {
  constexpr double kMinDistance = 0.25;
  constexpr double kMaxValue = 30.0;
  const auto kids = f.children();
  std::vector<Edif> args;
  for (const Expr& k : kids) {
    auto a = screened_eval(k, p);
    if (!a) {
      return std::nullopt;
    }
    args.push_back(*a);
  }
  switch (f.kind()) {
    case NodeKind::Div:
      if (modulus(args[1]) < kMinDistance) return std::nullopt;
      break;
    case NodeKind::IntPow:
      if (f.int_exponent() < 0 && modulus(args[0]) < kMinDistance) return std::nullopt;
      break;
    case NodeKind::Function:
      if (f.function() == Elementary::Log || f.function() == Elementary::Sqrt) {
        const Edif& a = args[0];
        if (modulus(a) < kMinDistance) return std::nullopt;
        if (a.u < 0.0 && std::abs(a.v) < kMinDistance * modulus(a)) return std::nullopt;
      }
      if (f.function() == Elementary::Tan &&
          modulus(edif_elementary(Elementary::Cos, args[0])) < kMinDistance) {
        return std::nullopt;
      }
      break;
    default:
      break;
  }
  Edif value;
  try {
    value = eval_field(f, p);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!value.is_finite() || modulus(value) > kMaxValue) {
    return std::nullopt;
  }
  return value;
}

}  // namespace detail

/// True when p is comfortably away from every singularity of f, the same
/// holds for a small neighborhood used by difference stencils, and the third
/// derivative (which sets the central-difference truncation error) is moderate.
inline bool is_regular_point(const Expr& f, const Point& p) {
  constexpr double r = 1e-3;
  constexpr double kMaxThirdDerivative = 1e4;
  for (const Point& q : {p, Point{p.x + r, p.y}, Point{p.x - r, p.y}, Point{p.x, p.y + r},
                         Point{p.x, p.y - r}}) {
    if (!detail::screened_eval(f, q)) {
      return false;
    }
  }
  if (f.is_function_of_z()) {
    try {
      if (modulus(eval_field(differentiate(f, 3), p)) > kMaxThirdDerivative) {
        return false;
      }
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace kahler::testing
