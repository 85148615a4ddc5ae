#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "dtt/kinematics.hpp"

using namespace dtt;

TEST_CASE("energy and momentum are inverse on the mass shell") {
  for (double p : {0.0, 1e-8, 0.3, 1.0, 7.0179, 42.0}) {
    const double E = energy_of_momentum(p);
    CHECK(E * E - p * p == doctest::Approx(1.0).epsilon(1e-14));
    if (p >= 0.3) CHECK(momentum_of_energy(cplx{E}).real() == doctest::Approx(p).epsilon(1e-12));
    CHECK(velocity_of_momentum(p) == doctest::Approx(p / E));
  }
  CHECK(momentum_of_velocity(0.99) == doctest::Approx(0.99 / std::sqrt(1.0 - 0.99 * 0.99)).epsilon(1e-15));
  CHECK(lorentz_gamma(0.6) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("complex energy satisfies E^2 = p^2 + 1 off the real axis") {
  const cplx p{7.1, 0.4};
  const cplx E = energy_of_momentum(p);
  CHECK(std::abs(E * E - p * p - 1.0) < 1e-13);
  CHECK(E.real() > 0.0);
}

TEST_CASE("free spinor is an eigenvector of the free Dirac Hamiltonian") {
  // H = sigma_x p + sigma_z; H u = E u.
  for (double p : {0.5, 3.0, 7.0}) {
    const Spinor u = free_spinor(cplx{p});
    const cplx E = energy_of_momentum(cplx{p});
    CHECK(std::abs(u.upper + p * u.lower - E * u.upper) < 1e-13);
    CHECK(std::abs(p * u.upper - u.lower - E * u.lower) < 1e-13);
  }
}

TEST_CASE("bottom preset packet parameters") {
  const PacketSpec pk = make_packet(0.99, 6.0, 0.0);
  CHECK(pk.p0 == doctest::Approx(7.0179239296).epsilon(1e-10));
  CHECK(pk.gamma == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
  CHECK(pk.position_width() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(pk.velocity() == doctest::Approx(0.99).epsilon(1e-15));
}

TEST_CASE("packet norm is one by independent quadrature") {
  for (double dz : {6.0, 10.0}) {
    const PacketSpec pk = make_packet(0.99, dz, 0.0);
    auto f = [&](double p) {
      const double u1 = p / (energy_of_momentum(p) + 1.0);
      const double env = std::exp(-(p - pk.p0) * (p - pk.p0) / pk.gamma);
      return 2.0 * std::numbers::pi * pk.K * pk.K * env * (1.0 + u1 * u1);
    };
    const double s = pk.sqrt_gamma();
    const double norm = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pk.p0 - 14 * s,
                                                                                       pk.p0 + 14 * s, 12, 1e-14);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(make_packet(0.99, 6.0, 0.0).K == doctest::Approx(0.5544280181).epsilon(1e-9));
}

TEST_CASE("initial upper component is a Gaussian in position") {
  const PacketSpec pk = make_packet(0.99, 6.0, 0.0);
  const double dz = pk.position_width();
  CHECK(initial_amplitude_ratio(pk, dz) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  const double ref = std::abs(initial_wavefunction(pk, 0.0).upper);
  CHECK(std::abs(initial_wavefunction(pk, dz).upper) / ref == doctest::Approx(std::exp(-0.5)).epsilon(1e-8));
}
