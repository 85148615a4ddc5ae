#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "dtt/frozen.hpp"
#include "dtt/propagator.hpp"

using namespace dtt;

namespace {
const PacketSpec kPacket = make_packet(0.99, 6.0, 0.0);
const BarrierSpec kBarrier = make_barrier(6.52, 120.0, 8.0);
}  // namespace

TEST_CASE("frozen density integrates to its closed-form mass") {
  const FrozenModel m = frozen_model(kPacket, kBarrier);
  auto f = [&](double t) { return m.density(t); };
  const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, m.t_mp - 40 * m.delta_t, m.t_mp + 40 * m.delta_t, 15, 1e-15);
  CHECK(total == doctest::Approx(m.C_sd0).epsilon(1e-10));
  CHECK(m.cumulative(m.t_mp) == doctest::Approx(0.5 * m.C_sd0).epsilon(1e-15));
}

TEST_CASE("frozen cumulative is the antiderivative of the density") {
  const FrozenModel m = frozen_model(kPacket, kBarrier);
  for (double t : {100.0, 118.0, 123.0, 130.0}) {
    const double h = 1e-3;
    CHECK((m.cumulative(t + h) - m.cumulative(t - h)) / (2 * h) ==
          doctest::Approx(m.density(t)).epsilon(1e-6));
  }
}

TEST_CASE("frozen model parameters for the bottom preset") {
  const FrozenModel m = frozen_model(kPacket, kBarrier);
  CHECK(m.im_p_residual < 1e-10);
  CHECK(m.t_mp < 128.0);
  CHECK(m.delta_t > 0.0);
  CHECK(m.delta_t == doctest::Approx(kPacket.sqrt_gamma() * std::abs(m.Delta_mp) / m.v_mp));
  CHECK(m.C_sd0 > 0.0);
  CHECK(m.C_sd0 < 1.0);
  // Delta variants differ only in the dispersion term.
  CHECK(m.delta_t_gamma0 == doctest::Approx(m.delta_t).epsilon(0.01));
  CHECK(m.delta_t_curvature == doctest::Approx(m.delta_t).epsilon(0.10));
}

TEST_CASE("frozen distribution carries the analytic cumulative") {
  const FrozenModel m = frozen_model(kPacket, kBarrier);
  const TimeDistribution d = m.distribution(time_range(0.0, 300.0, 0.5));
  CHECK(d.total == m.C_sd0);
  CHECK(d.cumulative[246] == m.cumulative(123.0));
  CHECK(d.label == "frozen");
}
