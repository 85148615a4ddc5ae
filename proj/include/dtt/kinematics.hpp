#pragma once

#include <complex>

namespace dtt {

using cplx = std::complex<double>;

/// Two-component Dirac spinor (upper, lower).
struct Spinor {
  cplx upper{1.0, 0.0};
  cplx lower{0.0, 0.0};
};

/// E(p) = sqrt(p^2 + 1), principal branch. The branch cut lies on the
/// imaginary p axis beyond |Im p| = 1, far from any physical saddle path.
cplx energy_of_momentum(cplx p);
double energy_of_momentum(double p);

/// p(E) = sqrt(E^2 - 1), principal branch (Re p >= 0 for real E > 1).
cplx momentum_of_energy(cplx E);

/// Group velocity dE/dp = p / E(p).
cplx velocity_of_momentum(cplx p);
double velocity_of_momentum(double p);

/// Momentum of a free particle moving at speed v (|v| < 1).
double momentum_of_velocity(double v);
double lorentz_gamma(double v);

/// Positive-energy free spinor u(p) = (1, p / (E(p) + 1)).
Spinor free_spinor(cplx p);

/// Initial Gaussian wavepacket: amplitude exp(-(p - p0)^2 / (2 Gamma)) in
/// momentum space, centred at z0 in position space.
struct PacketSpec {
  double p0 = 0.0;
  double gamma = 0.0;  ///< squared momentum width Gamma
  double z0 = 0.0;
  double K = 0.0;  ///< normalisation, fixed by normalise_packet

  double sqrt_gamma() const;
  double energy() const { return energy_of_momentum(p0); }
  double velocity() const { return velocity_of_momentum(p0); }
  /// Position-space width Delta z = 1 / sqrt(Gamma).
  double position_width() const;
};

/// Builds a normalised packet from a mean speed (fraction of c), a
/// position-space width Delta z (Gamma = 1 / Delta z^2) and a centre.
PacketSpec make_packet(double velocity, double position_width, double z0);

/// Computes K so that the free packet has unit norm,
///   2 pi K^2 int exp(-(p - p0)^2 / Gamma) (1 + |u_1(p)|^2) dp = 1,
/// by adaptive Gauss-Kronrod quadrature.
double packet_normalisation(double p0, double gamma);

/// Momentum-space amplitude exp(-(p - p0)^2 / (2 Gamma)) (without K).
double packet_envelope(const PacketSpec& packet, double p);

/// |psi_upper(z, 0)| / |psi_upper(z0, 0)| for the initial free packet; the
/// upper component is an exact Gaussian exp(-Gamma (z - z0)^2 / 2).
double initial_amplitude_ratio(const PacketSpec& packet, double z);

/// Initial free spinor wavefunction psi(z, 0), by direct quadrature of the
/// momentum integral (test helper; slow).
Spinor initial_wavefunction(const PacketSpec& packet, double z);

}  // namespace dtt
