#include "dtt/frozen.hpp"

#include <cmath>
#include <numbers>

namespace dtt {

namespace {
constexpr cplx kI{0.0, 1.0};
}

FrozenModel frozen_model(const PacketSpec& packet, const BarrierSpec& barrier) {
  return frozen_model(most_probable_saddle(packet, barrier), packet, barrier);
}

FrozenModel frozen_model(const SaddlePoint& mp, const PacketSpec& packet, const BarrierSpec& barrier) {
  FrozenModel m;
  m.gamma = packet.gamma;
  m.t_mp = mp.t;
  m.p_mp = mp.p.real();
  m.im_p_residual = std::abs(mp.p.imag());
  m.E_mp = energy_of_momentum(m.p_mp);
  m.v_mp = velocity_of_momentum(m.p_mp);
  m.gamma_mp = m.E_mp;
  m.E_0 = packet.energy();
  m.gamma_0 = m.E_0;
  m.sigma_mp = m.t_mp - (barrier.z1 - packet.z0) / m.v_mp;

  // d(v tau)/dp = -i d^2 ln T / dp^2 (the free flight is linear in p).
  const cplx L2 = log_transmission(cplx{m.p_mp}, barrier).d2;
  const cplx base = kI / packet.gamma - kI * L2;
  m.Delta_mp = base - m.t_mp / (m.gamma_mp * m.gamma_mp);
  const double sg = packet.sqrt_gamma();
  m.delta_t = sg * std::abs(m.Delta_mp) / m.v_mp;
  m.delta_t_gamma0 = sg * std::abs(base - m.t_mp / (m.gamma_0 * m.gamma_0)) / m.v_mp;
  m.delta_t_curvature = sg * std::abs(base - m.t_mp / (m.gamma_mp * m.gamma_mp * m.gamma_mp)) / m.v_mp;

  const Action a = action(cplx{m.p_mp}, m.t_mp, packet, barrier);
  m.im_F_mp = a.F.imag();
  m.C_sd0 = (m.E_0 + 1.0) * m.gamma_mp / ((m.E_mp + 1.0) * m.gamma_0) * std::exp(-2.0 * m.im_F_mp);
  return m;
}

double FrozenModel::density(double t) const {
  const double x = (t - t_mp) / delta_t;
  return C_sd0 / (std::sqrt(std::numbers::pi) * delta_t) * std::exp(-x * x);
}

double FrozenModel::cumulative(double t) const { return 0.5 * C_sd0 * std::erfc(-(t - t_mp) / delta_t); }

TimeDistribution FrozenModel::distribution(const std::vector<double>& times) const {
  std::vector<double> P(times.size()), C(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    P[i] = density(times[i]);
    C[i] = cumulative(times[i]);
  }
  return TimeDistribution::from_density_and_cumulative(times, std::move(P), std::move(C), C_sd0, 0.0, "frozen");
}

}  // namespace dtt
