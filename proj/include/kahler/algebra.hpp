#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kahler {

// Kähler (Clifford) algebra of differential forms on the real plane.
// Basis {1, dx, dy, dxdy} with dx*dx = dy*dy = 1, so (dxdy)^2 = -1.

class ZeroDivisor : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ZeroEdif : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonFinite : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Full multivector s + a dx + b dy + p dxdy.
struct Multivector {
  double s = 0.0;
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;

  static constexpr Multivector scalar(double v) { return {v, 0.0, 0.0, 0.0}; }
  static constexpr Multivector dx() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Multivector dy() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Multivector dxdy() { return {0.0, 0.0, 0.0, 1.0}; }

  friend constexpr bool operator==(const Multivector&, const Multivector&) = default;
};

Multivector operator+(const Multivector& x, const Multivector& y);
Multivector operator-(const Multivector& x, const Multivector& y);
Multivector operator-(const Multivector& x);
Multivector operator*(double k, const Multivector& m);

/// Clifford product under the basis table above.
Multivector clifford_product(const Multivector& x, const Multivector& y);
inline Multivector operator*(const Multivector& x, const Multivector& y) {
  return clifford_product(x, y);
}

Multivector even_part(const Multivector& m);
Multivector odd_part(const Multivector& m);
/// Flips the sign of the odd grades.
Multivector grade_involution(const Multivector& m);

// For a 1-form `v` and any form `m`: v ^ m = (v m + m^ v) / 2 and
// v . m = (v m - m^ v) / 2, where m^ is the grade involution.
Multivector wedge(const Multivector& one_form, const Multivector& m);
Multivector inner(const Multivector& one_form, const Multivector& m);

double norm(const Multivector& m);

/// Even differential form u + v dxdy.
struct Edif {
  double u = 0.0;
  double v = 0.0;

  constexpr Edif() = default;
  constexpr Edif(double scalar) : u(scalar) {}  // NOLINT: real numbers embed implicitly
  constexpr Edif(double u_, double v_) : u(u_), v(v_) {}

  static constexpr Edif unit() { return {0.0, 1.0}; }  // dxdy

  Multivector to_multivector() const { return {u, 0.0, 0.0, v}; }
  bool is_finite() const;

  friend constexpr bool operator==(const Edif&, const Edif&) = default;
};

/// Even part of a multivector, as an edif.
Edif to_edif(const Multivector& m);

Edif operator+(const Edif& x, const Edif& y);
Edif operator-(const Edif& x, const Edif& y);
Edif operator-(const Edif& x);
Edif edif_mul(const Edif& x, const Edif& y);
inline Edif operator*(const Edif& x, const Edif& y) { return edif_mul(x, y); }
Edif operator/(const Edif& x, const Edif& y);

/// Throws ZeroDivisor when u^2 + v^2 == 0.
Edif edif_inverse(const Edif& w);

/// sqrt(u^2 + v^2).
double modulus(const Edif& w);
/// Euclidean distance between two edifs seen as plane points.
double distance(const Edif& x, const Edif& y);

struct PolarForm {
  double rho = 0.0;
  double phi = 0.0;  // principal angle in (-pi, pi]
};

/// Throws ZeroEdif for w == 0.
PolarForm polar_decompose(const Edif& w);
Edif from_polar(const PolarForm& pf);

/// Integer power by square-and-multiply; negative n inverts first.
Edif edif_ipow(const Edif& w, int n);
/// Integer power through rho^n (cos n phi + dxdy sin n phi).
Edif edif_ipow_polar(const Edif& w, int n);

enum class Elementary { Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Sqrt };

std::string_view to_string(Elementary f);
/// Throws std::invalid_argument for unknown names.
Elementary elementary_from_name(std::string_view name);

/// Principal-branch elementary function of an edif.
/// Throws ZeroEdif for log/sqrt at 0 and NonFinite on overflow.
Edif edif_elementary(Elementary f, const Edif& w);

Edif edif_pow_real(const Edif& w, double exponent);

// Polar differentials at z = x + y dxdy, computed by Clifford products:
// dphi = (1/z) dy and drho = (rho/z) dx.
Multivector angle_differential(const Edif& z);
Multivector radius_differential(const Edif& z);

}  // namespace kahler
