#pragma once

// Second-order forward-mode jets over the complex numbers: a value together
// with its first and second derivatives with respect to one independent
// variable. Arithmetic propagates the derivatives exactly (up to rounding).

#include <complex>

namespace dtt {

struct Jet {
  using C = std::complex<double>;
  C v{};   // value
  C d1{};  // first derivative
  C d2{};  // second derivative

  static Jet variable(C x) { return {x, C{1.0, 0.0}, C{}}; }
  static Jet constant(C x) { return {x, C{}, C{}}; }
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator+(const Jet& a, Jet::C b) { return {a.v + b, a.d1, a.d2}; }
inline Jet operator+(Jet::C b, const Jet& a) { return a + b; }
inline Jet operator-(const Jet& a, Jet::C b) { return {a.v - b, a.d1, a.d2}; }
inline Jet operator-(Jet::C b, const Jet& a) { return {b - a.v, -a.d1, -a.d2}; }
inline Jet operator*(const Jet& a, Jet::C b) { return {a.v * b, a.d1 * b, a.d2 * b}; }
inline Jet operator*(Jet::C b, const Jet& a) { return a * b; }

inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

/// Chain rule: f(a) given f, f', f'' evaluated at a.v.
inline Jet compose(const Jet& a, Jet::C f, Jet::C df, Jet::C d2f) {
  return {f, df * a.d1, d2f * a.d1 * a.d1 + df * a.d2};
}

inline Jet reciprocal(const Jet& a) {
  const Jet::C r = 1.0 / a.v;
  return compose(a, r, -r * r, 2.0 * r * r * r);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(Jet::C a, const Jet& b) { return reciprocal(b) * a; }
inline Jet operator/(const Jet& a, Jet::C b) { return a * (1.0 / b); }

inline Jet sqrt(const Jet& a) {
  const Jet::C s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline Jet exp(const Jet& a) {
  const Jet::C e = std::exp(a.v);
  return compose(a, e, e, e);
}

/// Principal logarithm; derivatives are branch independent.
inline Jet log(const Jet& a) {
  const Jet::C r = 1.0 / a.v;
  return compose(a, std::log(a.v), r, -r * r);
}

}  // namespace dtt
