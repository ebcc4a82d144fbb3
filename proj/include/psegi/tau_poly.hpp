#pragma once

#include <cstdint>
#include <string_view>

namespace psegi {

/// q(tau) = a tau^2 + b tau + c: a selection-event quantity restricted to the
/// line x(tau) = z + tau y.
struct TauPoly {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static constexpr TauPoly constant(double v) { return {0.0, 0.0, v}; }
  static constexpr TauPoly linear(double intercept, double slope) { return {0.0, slope, intercept}; }

  constexpr double eval(double tau) const { return a * tau * tau + b * tau + c; }

  /// Product of two polynomials of degree <= 1.
  static constexpr TauPoly product(const TauPoly& u, const TauPoly& v) {
    return {u.b * v.b, u.b * v.c + u.c * v.b, u.c * v.c};
  }

  constexpr TauPoly& operator+=(const TauPoly& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    return *this;
  }
  constexpr TauPoly& operator-=(const TauPoly& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    return *this;
  }
  constexpr TauPoly& operator*=(double s) {
    a *= s;
    b *= s;
    c *= s;
    return *this;
  }
  friend constexpr TauPoly operator+(TauPoly l, const TauPoly& r) { return l += r; }
  friend constexpr TauPoly operator-(TauPoly l, const TauPoly& r) { return l -= r; }
  friend constexpr TauPoly operator*(double s, TauPoly p) { return p *= s; }
  friend constexpr TauPoly operator-(TauPoly p) { return p *= -1.0; }
  friend constexpr bool operator==(const TauPoly&, const TauPoly&) = default;

  constexpr bool is_zero() const { return a == 0.0 && b == 0.0 && c == 0.0; }
};

/// True when l - r is zero up to rounding in every coefficient, i.e. the two
/// polynomials agree for every tau and their comparison carries no
/// information.
bool nearly_equal(const TauPoly& l, const TauPoly& r, double rel = 1e-12);

enum class Relation : std::uint8_t { le, lt, ge, gt };

constexpr Relation negate(Relation r) {
  switch (r) {
  case Relation::le: return Relation::gt;
  case Relation::lt: return Relation::ge;
  case Relation::ge: return Relation::lt;
  case Relation::gt: return Relation::le;
  }
  return r;
}

constexpr bool is_upper(Relation r) { return r == Relation::le || r == Relation::lt; }

std::string_view to_string(Relation r);

/// Which part of an algorithm produced a constraint.
enum class Origin : std::uint8_t {
  seed_max,
  seed_min,
  gc_piece,
  gc_piece_sign,
  gc_kmax,
  gc_init,
  gc_grow,
  gc_augment_cmp,
  gc_adopt,
  th_local,
  th_otsu,
  th_order,
  th_otsu_level,
  test,
};

inline constexpr int kOriginCount = static_cast<int>(Origin::test) + 1;

/// Stable tag such as "gc:augment-cmp" or "seed:max".
std::string_view to_string(Origin o);

struct TauConstraint {
  TauPoly poly;
  Relation relation = Relation::le;
  Origin origin = Origin::test;

  /// Raw membership test; strict and non-strict relations are both treated
  /// as closed, widened by tol.
  bool holds(double tau, double tol = 0.0) const {
    const double v = poly.eval(tau);
    return is_upper(relation) ? v <= tol : v >= -tol;
  }
};

} // namespace psegi
