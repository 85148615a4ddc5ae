#pragma once

// Double-double arithmetic (an unevaluated sum hi + lo, about 31 significant
// digits) built on the error-free transformations TwoSum and TwoProd. Only
// the handful of operations the quadrature kernels need are provided.

#include <cmath>

namespace dtt {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

namespace dd {

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble s = dd::two_sum(a.hi, b.hi);
  DoubleDouble t = dd::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator+(const DoubleDouble& a, double b) {
  DoubleDouble s = dd::two_sum(a.hi, b);
  s.lo += a.lo;
  return dd::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, double b) {
  DoubleDouble p = dd::two_prod(a.hi, b);
  p.lo = std::fma(a.lo, b, p.lo);
  return dd::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble p = dd::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator+=(DoubleDouble& a, double b) { return a = a + b; }

/// One Newton correction on top of the double square root.
inline DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi <= 0.0) return {0.0, 0.0};
  const double x = std::sqrt(a.hi);
  const DoubleDouble x2 = dd::two_prod(x, x);
  const DoubleDouble r = a - x2;
  return dd::quick_two_sum(x, r.hi / (2.0 * x));
}

namespace dd {

inline constexpr DoubleDouble two_pi{6.283185307179586232e+00, 2.449293598294706414e-16};

/// Reduces a double-double angle to [-pi, pi] and rounds to double.
inline double reduce_angle(const DoubleDouble& a) {
  const double n = std::nearbyint(a.hi / two_pi.hi);
  const DoubleDouble r = a - two_pi * n;
  return r.to_double();
}

}  // namespace dd

/// Compensated (Neumaier) accumulator for plain doubles.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace dtt
