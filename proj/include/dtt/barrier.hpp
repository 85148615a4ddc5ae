#pragma once

#include "dtt/jet.hpp"
#include "dtt/kinematics.hpp"

namespace dtt {

/// Rectangular barrier V(z) = v_top on (z1, z2), zero elsewhere. The
/// detector sits at the right edge z2.
struct BarrierSpec {
  double v_top = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;

  double width() const { return z2 - z1; }
};

BarrierSpec make_barrier(double v_top, double z1, double width);

/// q = sqrt(1 - (E - V)^2), principal root. Real and positive in the
/// tunnelling window |E - V| < 1; zero at the critical energies V +- 1.
cplx evanescent_momentum(cplx E, const BarrierSpec& barrier);

/// alpha = i (q / p) (E + 1) / (E - V + 1). Throws DegenerateInput when p = 0
/// or the denominator vanishes.
cplx alpha_ratio(cplx E, cplx p, cplx q, const BarrierSpec& barrier);

/// Transmission amplitude
///   T(p) = exp(-i p l) / (cosh(q l) + (1 + alpha^2) / (2 alpha) sinh(q l)).
/// The denominator is even in q, so it is evaluated as C(q^2) + G S(q^2) with
/// C = cosh(q l) and S = sinh(q l) / q entire in q^2; this is finite and
/// smooth through the critical points q = 0 (series branch for small |q l|).
cplx transmission_amplitude(cplx p, const BarrierSpec& barrier);

/// Denominator of T (T = exp(-i p l) / D).
cplx transmission_denominator(cplx p, const BarrierSpec& barrier);

/// Textbook sinh/cosh form with the principal q; undefined at q = 0.
/// Kept as a cross-check of the stable form.
cplx transmission_amplitude_direct(cplx p, const BarrierSpec& barrier);

/// ln T(p) with its first and second p-derivatives, computed by forward-mode
/// differentiation (exact up to rounding).
Jet log_transmission(cplx p, const BarrierSpec& barrier);

/// d ln T / dp.
cplx log_T_derivative(cplx p, const BarrierSpec& barrier);

/// Complex phase time tau = -i d ln(T(p) exp(i p L)) / dE, where L is an
/// optional free path (for instance z2 - z0) whose flight time is included.
/// Re tau is the Wigner phase time, Im tau the Pollak-Miller time.
/// Throws DegenerateInput at p = 0.
cplx phase_time(cplx p, const BarrierSpec& barrier, double free_path = 0.0);

/// Same quantity differentiated with respect to E directly (E is the
/// independent variable of the jet). Independent of the p-route.
cplx phase_time_energy(cplx E, const BarrierSpec& barrier, double free_path = 0.0);

struct ScatteringPoint {
  cplx p;
  cplx E;
  cplx q;
  cplx alpha;
  cplx T;
  cplx dlnT_dp;
};

ScatteringPoint scattering_point(cplx p, const BarrierSpec& barrier);

/// Real momenta of the critical energies V +- 1 (negative when the energy lies
/// below the rest mass and no such momentum exists).
struct CriticalMomenta {
  double lower = -1.0;  ///< E = V - 1
  double upper = -1.0;  ///< E = V + 1
};

CriticalMomenta critical_momenta(const BarrierSpec& barrier);

}  // namespace dtt
