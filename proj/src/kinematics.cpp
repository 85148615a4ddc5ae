#include "dtt/kinematics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "dtt/error.hpp"

namespace dtt {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx energy_of_momentum(cplx p) { return std::sqrt(p * p + 1.0); }

double energy_of_momentum(double p) { return std::hypot(p, 1.0); }

cplx momentum_of_energy(cplx E) { return std::sqrt(E * E - 1.0); }

cplx velocity_of_momentum(cplx p) { return p / energy_of_momentum(p); }

double velocity_of_momentum(double p) { return p / energy_of_momentum(p); }

double momentum_of_velocity(double v) {
  if (!(std::abs(v) < 1.0)) throw DomainError("speed must satisfy |v| < c");
  return v / std::sqrt((1.0 - v) * (1.0 + v));
}

double lorentz_gamma(double v) {
  if (!(std::abs(v) < 1.0)) throw DomainError("speed must satisfy |v| < c");
  return 1.0 / std::sqrt((1.0 - v) * (1.0 + v));
}

Spinor free_spinor(cplx p) { return {cplx{1.0, 0.0}, p / (energy_of_momentum(p) + 1.0)}; }

double PacketSpec::sqrt_gamma() const { return std::sqrt(gamma); }

double PacketSpec::position_width() const { return 1.0 / std::sqrt(gamma); }

double packet_normalisation(double p0, double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("packet.width", "Gamma must be positive");
  const double s = std::sqrt(gamma);
  auto density = [&](double p) {
    const double u1 = p / (energy_of_momentum(p) + 1.0);
    const double d = p - p0;
    return std::exp(-d * d / gamma) * (1.0 + u1 * u1);
  };
  double err = 0.0;
  // exp(-x^2) is below 1e-300 beyond 27 widths, so the window is exact.
  const double norm = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      density, p0 - 27.0 * s, p0 + 27.0 * s, 15, 1e-15, &err);
  return 1.0 / std::sqrt(2.0 * kPi * norm);
}

PacketSpec make_packet(double velocity, double position_width, double z0) {
  if (!(position_width > 0.0)) throw ConfigError("packet.width", "width must be positive");
  PacketSpec packet;
  packet.p0 = momentum_of_velocity(velocity);
  packet.gamma = 1.0 / (position_width * position_width);
  packet.z0 = z0;
  packet.K = packet_normalisation(packet.p0, packet.gamma);
  return packet;
}

double packet_envelope(const PacketSpec& packet, double p) {
  const double d = p - packet.p0;
  return std::exp(-d * d / (2.0 * packet.gamma));
}

double initial_amplitude_ratio(const PacketSpec& packet, double z) {
  const double d = z - packet.z0;
  return std::exp(-packet.gamma * d * d / 2.0);
}

Spinor initial_wavefunction(const PacketSpec& packet, double z) {
  const double s = packet.sqrt_gamma();
  auto component = [&](bool lower) {
    auto re = [&](double p) {
      const double u = lower ? p / (energy_of_momentum(p) + 1.0) : 1.0;
      return packet_envelope(packet, p) * u * std::cos(p * (z - packet.z0));
    };
    auto im = [&](double p) {
      const double u = lower ? p / (energy_of_momentum(p) + 1.0) : 1.0;
      return packet_envelope(packet, p) * u * std::sin(p * (z - packet.z0));
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double a = packet.p0 - 40.0 * s;
    const double b = packet.p0 + 40.0 * s;
    return packet.K * cplx{GK::integrate(re, a, b, 20, 1e-14), GK::integrate(im, a, b, 20, 1e-14)};
  };
  return {component(false), component(true)};
}

}  // namespace dtt
