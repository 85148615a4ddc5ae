#include <cmath>

#include "doctest.h"
#include "dtt/error.hpp"
#include "dtt/grid.hpp"
#include "dtt/propagator.hpp"
#include "dtt/saddle.hpp"

using namespace dtt;

namespace {
const PacketSpec kBottomPacket = make_packet(0.99, 6.0, 0.0);
const BarrierSpec kBottomBarrier = make_barrier(6.52, 120.0, 8.0);
const PacketSpec kTopPacket = make_packet(0.99, 10.0, 0.0);
const BarrierSpec kTopBarrier = make_barrier(7.5, 120.0, 10.0);
}  // namespace

TEST_CASE("action derivatives match finite differences") {
  for (cplx p : {cplx{7.0, 0.2}, cplx{7.26, 0.0}, cplx{6.9, -0.3}}) {
    const double t = 110.0, h = 1e-4;
    const Action a = action(p, t, kBottomPacket, kBottomBarrier);
    auto F = [&](cplx x) { return action(x, t, kBottomPacket, kBottomBarrier).F; };
    auto Fp = [&](cplx x) { return action(x, t, kBottomPacket, kBottomBarrier).Fp; };
    const cplx dF = (-F(p + 2 * h) + 8.0 * F(p + h) - 8.0 * F(p - h) + F(p - 2 * h)) / (12 * h);
    const cplx dFp = (-Fp(p + 2 * h) + 8.0 * Fp(p + h) - 8.0 * Fp(p - h) + Fp(p - 2 * h)) / (12 * h);
    CHECK(std::abs(a.Fp - dF) < 1e-7 * std::max(1.0, std::abs(a.Fp)));
    CHECK(std::abs(a.Fpp - dFp) < 1e-7 * std::max(1.0, std::abs(a.Fpp)));
  }
}

TEST_CASE("saddle residual vanishes and the stationarity condition holds") {
  const SaddlePoint s = solve_saddle(100.0, cplx{7.1, 0.2}, kBottomPacket, kBottomBarrier);
  REQUIRE(s.converged);
  CHECK(s.residual < 1e-10);
  // Fp = 0  <=>  (p - p0) / Gamma = i (tau - t) v.
  const cplx lhs = (s.p - kBottomPacket.p0) / kBottomPacket.gamma;
  const cplx rhs = cplx(0.0, 1.0) * (s.tau - s.t) * s.v;
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
}

TEST_CASE("real-axis saddle balances momentum filtering") {
  const double p = real_axis_saddle(kBottomPacket, kBottomBarrier);
  const double lhs = (p - kBottomPacket.p0) / kBottomPacket.gamma;
  CHECK(lhs == doctest::Approx(log_T_derivative(cplx{p}, kBottomBarrier).real()).epsilon(1e-9));
  CHECK(p > kBottomPacket.p0);
  CHECK(std::abs(energy_of_momentum(p) - kBottomBarrier.v_top) < 1.0);
}

TEST_CASE("most probable saddle lies on the real axis at t = Re tau") {
  for (auto [pk, b] : {std::pair{kBottomPacket, kBottomBarrier}, std::pair{kTopPacket, kTopBarrier}}) {
    const SaddlePoint mp = most_probable_saddle(pk, b);
    CHECK(std::abs(mp.p.imag()) < 1e-10);
    CHECK(mp.t == doctest::Approx(mp.tau.real()).epsilon(1e-10));
    CHECK(mp.residual < 1e-10);
  }
}

TEST_CASE("continuation keeps every point converged and ordered") {
  const SaddlePoint mp = most_probable_saddle(kBottomPacket, kBottomBarrier);
  const auto times = time_range(0.0, 250.0, 1.0);
  const SaddleTrace tr = continue_saddle(mp, times, kBottomPacket, kBottomBarrier, 0.5);
  REQUIRE(tr.points.size() == times.size());
  for (std::size_t i = 0; i < tr.points.size(); ++i) {
    CHECK(tr.points[i].t == times[i]);
    CHECK(tr.points[i].residual < 1e-10);
  }
  // Continuous path: neighbouring saddles close compared to the predictor scale.
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    CHECK(std::abs(tr.points[i].p - tr.points[i - 1].p) < 0.1);
}

TEST_CASE("steepest descent tracks the exact early tail for the top preset") {
  const auto times = time_range(60.0, 122.0, 2.0);
  const SdaResult sda = sda_distribution(times, kTopPacket, kTopBarrier);
  const TransmittedPacket k(build_grid(kTopPacket, kTopBarrier, 20000), kTopPacket, kTopBarrier);
  for (const SaddlePoint& s : sda.trace.points) {
    const double exact = k.flux(s.t, Precision::Extended);
    CHECK(std::abs(sda_flux(s, kTopPacket) - exact) <= 0.05 * exact);
  }
}

TEST_CASE("steepest-descent spinor reproduces the flux") {
  const SaddlePoint mp = most_probable_saddle(kTopPacket, kTopBarrier);
  cplx branch{};
  const Spinor psi = sda_spinor(mp, kTopPacket, branch);
  const double flux = 2.0 * (std::conj(psi.upper) * psi.lower).real();
  CHECK(flux == doctest::Approx(sda_flux(mp, kTopPacket)).epsilon(1e-12));
}

TEST_CASE("tau trace fades to the free flight at early times") {
  const TauTrace tr = tau_sharp_trace(time_range(0.0, 200.0, 1.0), kBottomPacket, kBottomBarrier);
  REQUIRE(!tr.samples.empty());
  CHECK(tr.samples.front().t == 0.0);
  CHECK(tr.samples.front().re_tau > tr.re_tau_mp);
  CHECK(tr.re_tau_mp < 128.0);
}

TEST_CASE("tau map has the path and finite values") {
  const TauMap m = tau_contour_map(6.6, 7.8, -1.0, 1.0, 25, 21, kBottomPacket, kBottomBarrier, 0.0, 200.0);
  CHECK(m.re_tau.size() == 25 * 21);
  CHECK(m.path.size() == 21);
  CHECK(m.path_times.front() == 0.0);
  CHECK(std::isfinite(m.at(12, 10)));
  CHECK(m.at(12, 10) == doctest::Approx(phase_time(cplx{m.x(12), m.y(10)}, kBottomBarrier, 128.0).real()));
  CHECK_THROWS_AS(tau_contour_map(6.6, 7.8, -1.0, 1.0, 1, 21, kBottomPacket, kBottomBarrier, 0.0, 1.0),
                  ConfigError);
}
