#include "dtt/barrier.hpp"

#include <cmath>

#include "dtt/error.hpp"

namespace dtt {

namespace {

constexpr cplx kI{0.0, 1.0};

// k(u) = cosh(sqrt u), h(u) = sinh(sqrt u) / sqrt u and the first two
// derivatives of h. k' = h / 2 and k'' = h' / 2 follow.
struct EntireFunctions {
  cplx k, h, h1, h2;
};

EntireFunctions entire_functions(cplx u) {
  EntireFunctions f;
  if (std::abs(u) <= 9.0) {
    // Power series; all terms are of the form u^n / (2n + j)!.
    cplx un{1.0, 0.0};
    double fk = 1.0;  // (2n)!
    for (int n = 0; n < 60; ++n) {
      const double f1 = fk * (2 * n + 1);
      const double f3 = f1 * (2 * n + 2) * (2 * n + 3);
      const double f5 = f3 * (2 * n + 4) * (2 * n + 5);
      const cplx tk = un / fk;
      f.k += tk;
      f.h += un / f1;
      f.h1 += un * double(n + 1) / f3;
      f.h2 += un * double((n + 1) * (n + 2)) / f5;
      if (std::abs(tk) < 1e-20 * std::abs(f.k) && n > 2) break;
      un *= u;
      fk = f1 * (2 * n + 2);
    }
    return f;
  }
  const cplx x = std::sqrt(u);
  const cplx s = std::sinh(x);
  const cplx c = std::cosh(x);
  const cplx x2 = x * x;
  f.k = c;
  f.h = s / x;
  f.h1 = (x * c - s) / (2.0 * x2 * x);
  f.h2 = (x2 * s - 3.0 * x * c + 3.0 * s) / (4.0 * x2 * x2 * x);
  return f;
}

// Denominator D = C(z) + G S(z) as a jet in the independent variable of P/E.
Jet denominator_jet(const Jet& P, const Jet& E, const BarrierSpec& barrier) {
  const double l = barrier.width();
  const Jet w = E - cplx{barrier.v_top};
  const Jet z = cplx{1.0} - w * w;
  const EntireFunctions f = entire_functions(l * l * z.v);
  const double l2 = l * l;
  const Jet C = compose(z, f.k, 0.5 * l2 * f.h, 0.5 * l2 * l2 * f.h1);
  const Jet S = compose(z, l * f.h, l2 * l * f.h1, l2 * l2 * l * f.h2);
  const Jet Ep1 = E + cplx{1.0};
  const Jet G = (0.5 * kI) * (Ep1 * (cplx{1.0} - w) / P - P * (cplx{1.0} + w) / Ep1);
  return C + G * S;
}

void require_nonzero_momentum(cplx p) {
  if (p == cplx{}) throw DegenerateInput("momentum p = 0 is a degenerate input");
}

}  // namespace

BarrierSpec make_barrier(double v_top, double z1, double width) {
  if (!(width >= 0.0)) throw ConfigError("barrier.width", "width must be non-negative");
  return {v_top, z1, z1 + width};
}

cplx evanescent_momentum(cplx E, const BarrierSpec& barrier) {
  const cplx w = E - barrier.v_top;
  return std::sqrt(1.0 - w * w);
}

cplx alpha_ratio(cplx E, cplx p, cplx q, const BarrierSpec& barrier) {
  require_nonzero_momentum(p);
  const cplx den = E - barrier.v_top + 1.0;
  if (den == cplx{}) throw DegenerateInput("E - V_top + mc^2 = 0 in alpha");
  return kI * (q / p) * ((E + 1.0) / den);
}

cplx transmission_denominator(cplx p, const BarrierSpec& barrier) {
  require_nonzero_momentum(p);
  const double l = barrier.width();
  const cplx E = energy_of_momentum(p);
  const cplx w = E - barrier.v_top;
  const cplx z = 1.0 - w * w;
  const EntireFunctions f = entire_functions(l * l * z);
  const cplx G = 0.5 * kI * ((E + 1.0) * (1.0 - w) / p - p * (1.0 + w) / (E + 1.0));
  return f.k + G * (l * f.h);
}

cplx transmission_amplitude(cplx p, const BarrierSpec& barrier) {
  return std::exp(-kI * p * barrier.width()) / transmission_denominator(p, barrier);
}

cplx transmission_amplitude_direct(cplx p, const BarrierSpec& barrier) {
  const double l = barrier.width();
  const cplx E = energy_of_momentum(p);
  const cplx q = evanescent_momentum(E, barrier);
  const cplx a = alpha_ratio(E, p, q, barrier);
  if (a == cplx{}) throw DegenerateInput("alpha = 0 at a critical point");
  return std::exp(-kI * p * l) / (std::cosh(q * l) + (1.0 + a * a) / (2.0 * a) * std::sinh(q * l));
}

Jet log_transmission(cplx p, const BarrierSpec& barrier) {
  require_nonzero_momentum(p);
  const Jet P = Jet::variable(p);
  const Jet E = sqrt(P * P + cplx{1.0});
  const Jet D = denominator_jet(P, E, barrier);
  return (-kI * barrier.width()) * P - log(D);
}

cplx log_T_derivative(cplx p, const BarrierSpec& barrier) { return log_transmission(p, barrier).d1; }

cplx phase_time(cplx p, const BarrierSpec& barrier, double free_path) {
  const cplx L1 = log_T_derivative(p, barrier) + kI * free_path;
  return -kI * L1 / velocity_of_momentum(p);
}

cplx phase_time_energy(cplx E, const BarrierSpec& barrier, double free_path) {
  const Jet Ej = Jet::variable(E);
  const Jet P = sqrt(Ej * Ej - cplx{1.0});
  require_nonzero_momentum(P.v);
  const Jet D = denominator_jet(P, Ej, barrier);
  const Jet lnT = (kI * (free_path - barrier.width())) * P - log(D);
  return -kI * lnT.d1;
}

ScatteringPoint scattering_point(cplx p, const BarrierSpec& barrier) {
  ScatteringPoint s;
  s.p = p;
  s.E = energy_of_momentum(p);
  s.q = evanescent_momentum(s.E, barrier);
  s.alpha = alpha_ratio(s.E, p, s.q, barrier);
  s.T = transmission_amplitude(p, barrier);
  s.dlnT_dp = log_T_derivative(p, barrier);
  return s;
}

CriticalMomenta critical_momenta(const BarrierSpec& barrier) {
  CriticalMomenta c;
  const double lo = barrier.v_top - 1.0;
  const double hi = barrier.v_top + 1.0;
  if (lo > 1.0) c.lower = std::sqrt(lo * lo - 1.0);
  if (hi > 1.0) c.upper = std::sqrt(hi * hi - 1.0);
  return c;
}

}  // namespace dtt
