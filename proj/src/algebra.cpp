#include "kahler/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kahler {

Multivector operator+(const Multivector& x, const Multivector& y) {
  return {x.s + y.s, x.a + y.a, x.b + y.b, x.p + y.p};
}

Multivector operator-(const Multivector& x, const Multivector& y) {
  return {x.s - y.s, x.a - y.a, x.b - y.b, x.p - y.p};
}

Multivector operator-(const Multivector& x) { return {-x.s, -x.a, -x.b, -x.p}; }

Multivector operator*(double k, const Multivector& m) {
  return {k * m.s, k * m.a, k * m.b, k * m.p};
}

Multivector clifford_product(const Multivector& x, const Multivector& y) {
  // dx dy = dxdy, dy dx = -dxdy, dxdy dx = -dy, dx dxdy = dy,
  // dxdy dy = dx, dy dxdy = -dx, dxdy dxdy = -1.
  return {
      x.s * y.s + x.a * y.a + x.b * y.b - x.p * y.p,
      x.s * y.a + x.a * y.s - x.b * y.p + x.p * y.b,
      x.s * y.b + x.b * y.s + x.a * y.p - x.p * y.a,
      x.s * y.p + x.p * y.s + x.a * y.b - x.b * y.a,
  };
}

Multivector even_part(const Multivector& m) { return {m.s, 0.0, 0.0, m.p}; }
Multivector odd_part(const Multivector& m) { return {0.0, m.a, m.b, 0.0}; }
Multivector grade_involution(const Multivector& m) { return {m.s, -m.a, -m.b, m.p}; }

Multivector wedge(const Multivector& one_form, const Multivector& m) {
  return 0.5 * (one_form * m + grade_involution(m) * one_form);
}

Multivector inner(const Multivector& one_form, const Multivector& m) {
  return 0.5 * (one_form * m - grade_involution(m) * one_form);
}

double norm(const Multivector& m) {
  return std::sqrt(m.s * m.s + m.a * m.a + m.b * m.b + m.p * m.p);
}

bool Edif::is_finite() const { return std::isfinite(u) && std::isfinite(v); }

Edif to_edif(const Multivector& m) { return {m.s, m.p}; }

Edif operator+(const Edif& x, const Edif& y) { return {x.u + y.u, x.v + y.v}; }
Edif operator-(const Edif& x, const Edif& y) { return {x.u - y.u, x.v - y.v}; }
Edif operator-(const Edif& x) { return {-x.u, -x.v}; }

Edif edif_mul(const Edif& x, const Edif& y) {
  return {x.u * y.u - x.v * y.v, x.u * y.v + x.v * y.u};
}

Edif edif_inverse(const Edif& w) {
  if (w.u == 0.0 && w.v == 0.0) {
    throw ZeroDivisor("edif has no inverse: u^2 + v^2 = 0");
  }
  // Scale first so u^2 + v^2 cannot overflow or underflow.
  const double scale = std::max(std::abs(w.u), std::abs(w.v));
  const double us = w.u / scale;
  const double vs = w.v / scale;
  const double d = (us * us + vs * vs) * scale;
  return {us / d, -vs / d};
}

Edif operator/(const Edif& x, const Edif& y) { return x * edif_inverse(y); }

double modulus(const Edif& w) { return std::hypot(w.u, w.v); }

double distance(const Edif& x, const Edif& y) { return modulus(x - y); }

PolarForm polar_decompose(const Edif& w) {
  if (w.u == 0.0 && w.v == 0.0) {
    throw ZeroEdif("polar form of the zero edif is undefined");
  }
  double phi = std::atan2(w.v, w.u);
  if (phi == -std::numbers::pi) {
    phi = std::numbers::pi;
  }
  return {modulus(w), phi};
}

Edif from_polar(const PolarForm& pf) {
  return {pf.rho * std::cos(pf.phi), pf.rho * std::sin(pf.phi)};
}

Edif edif_ipow(const Edif& w, int n) {
  if (n == 0) {
    return Edif{1.0};
  }
  Edif base = n < 0 ? edif_inverse(w) : w;
  // Avoid overflow of -n for INT_MIN by working in unsigned.
  unsigned long long e = n < 0 ? 0ULL - static_cast<unsigned long long>(static_cast<long long>(n))
                               : static_cast<unsigned long long>(n);
  Edif result{1.0};
  while (e != 0) {
    if (e & 1ULL) {
      result = result * base;
    }
    e >>= 1U;
    if (e != 0) {
      base = base * base;
    }
  }
  return result;
}

Edif edif_ipow_polar(const Edif& w, int n) {
  if (n == 0) {
    return Edif{1.0};
  }
  if (w.u == 0.0 && w.v == 0.0) {
    if (n < 0) {
      throw ZeroDivisor("negative power of the zero edif");
    }
    return Edif{};
  }
  const PolarForm pf = polar_decompose(w);
  const double k = static_cast<double>(n);
  const double r = std::pow(pf.rho, k);
  return {r * std::cos(k * pf.phi), r * std::sin(k * pf.phi)};
}

std::string_view to_string(Elementary f) {
  switch (f) {
    case Elementary::Exp: return "exp";
    case Elementary::Log: return "log";
    case Elementary::Sin: return "sin";
    case Elementary::Cos: return "cos";
    case Elementary::Tan: return "tan";
    case Elementary::Sinh: return "sinh";
    case Elementary::Cosh: return "cosh";
    case Elementary::Sqrt: return "sqrt";
  }
  return "?";
}

Elementary elementary_from_name(std::string_view name) {
  for (Elementary f : {Elementary::Exp, Elementary::Log, Elementary::Sin, Elementary::Cos,
                       Elementary::Tan, Elementary::Sinh, Elementary::Cosh, Elementary::Sqrt}) {
    if (to_string(f) == name) {
      return f;
    }
  }
  throw std::invalid_argument("unknown elementary function: " + std::string(name));
}

namespace {

Edif edif_sqrt(const Edif& w) {
  if (w.u == 0.0 && w.v == 0.0) {
    throw ZeroEdif("sqrt of the zero edif");
  }
  // t = sqrt((|u| + rho) / 2) never cancels; the other part follows from 2 t s = v.
  const double t = std::sqrt(0.5 * (std::abs(w.u) + modulus(w)));
  if (w.u >= 0.0) {
    return {t, w.v / (2.0 * t)};
  }
  // v == -0 still lies on the principal side phi = pi.
  const double s = w.v == 0.0 ? t : std::copysign(t, w.v);
  return {w.v / (2.0 * s), s};
}

Edif edif_tan(const Edif& w) {
  const double two_u = 2.0 * w.u;
  const double two_v = 2.0 * w.v;
  if (std::abs(w.v) > 20.0) {
    // tanh(2|v|) == 1 in double precision; the scalar part decays like e^{-2|v|}.
    const double decay = std::exp(-std::abs(two_v));
    return {2.0 * std::sin(two_u) * decay, std::copysign(1.0, w.v)};
  }
  const double d = std::cos(two_u) + std::cosh(two_v);
  return {std::sin(two_u) / d, std::sinh(two_v) / d};
}

}  // namespace

Edif edif_elementary(Elementary f, const Edif& w) {
  Edif r;
  switch (f) {
    case Elementary::Exp: {
      const double m = std::exp(w.u);
      r = {m * std::cos(w.v), m * std::sin(w.v)};
      break;
    }
    case Elementary::Log: {
      const PolarForm pf = polar_decompose(w);
      r = {std::log(pf.rho), pf.phi};
      break;
    }
    case Elementary::Sin:
      r = {std::sin(w.u) * std::cosh(w.v), std::cos(w.u) * std::sinh(w.v)};
      break;
    case Elementary::Cos:
      r = {std::cos(w.u) * std::cosh(w.v), -std::sin(w.u) * std::sinh(w.v)};
      break;
    case Elementary::Tan:
      r = edif_tan(w);
      break;
    case Elementary::Sinh:
      r = {std::sinh(w.u) * std::cos(w.v), std::cosh(w.u) * std::sin(w.v)};
      break;
    case Elementary::Cosh:
      r = {std::cosh(w.u) * std::cos(w.v), std::sinh(w.u) * std::sin(w.v)};
      break;
    case Elementary::Sqrt:
      r = edif_sqrt(w);
      break;
  }
  if (!r.is_finite()) {
    throw NonFinite(std::string(to_string(f)) + " overflowed");
  }
  return r;
}

Edif edif_pow_real(const Edif& w, double exponent) {
  if (w.u == 0.0 && w.v == 0.0) {
    if (exponent > 0.0) {
      return Edif{};
    }
    throw ZeroDivisor("non-positive power of the zero edif");
  }
  return edif_elementary(Elementary::Exp,
                         Edif{exponent} * edif_elementary(Elementary::Log, w));
}

Multivector angle_differential(const Edif& z) {
  return edif_inverse(z).to_multivector() * Multivector::dy();
}

Multivector radius_differential(const Edif& z) {
  const double rho = modulus(z);
  return (Edif{rho} * edif_inverse(z)).to_multivector() * Multivector::dx();
}

}  // namespace kahler
