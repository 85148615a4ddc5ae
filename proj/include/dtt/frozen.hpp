#pragma once

#include <vector>

#include "dtt/barrier.hpp"
#include "dtt/kinematics.hpp"
#include "dtt/saddle.hpp"
#include "dtt/time_distribution.hpp"

namespace dtt {

/// Gaussian ("frozen") steepest-descent model expanded about the most
/// probable time:
///   P_sd0(t) = C_sd0 v / (sqrt(pi Gamma) |Delta|) exp(-v^2 (t - t_mp)^2 / (Gamma |Delta|^2)),
///   Delta    = i / Gamma + d(v tau)/dp - t_mp / gamma^2,
///   C_sd0    = (E0 + 1) gamma# / ((E# + 1) gamma0) exp(-2 Im F#),
/// with every # quantity taken at p#(t_mp).
struct FrozenModel {
  double t_mp = 0.0;
  double delta_t = 0.0;
  double C_sd0 = 0.0;
  cplx Delta_mp;
  double sigma_mp = 0.0;  ///< t_mp - (z1 - z0) / v#
  double v_mp = 0.0;
  double p_mp = 0.0;
  double gamma_mp = 0.0;
  double gamma_0 = 0.0;
  double E_0 = 0.0;
  double E_mp = 0.0;
  double im_F_mp = 0.0;
  double gamma = 0.0;  ///< packet Gamma

  /// delta_t with the t_mp / gamma^2 term evaluated at p0 instead of p#.
  double delta_t_gamma0 = 0.0;
  /// delta_t with the exact curvature t_mp / gamma^3 (that is, |F_pp|).
  double delta_t_curvature = 0.0;
  double im_p_residual = 0.0;  ///< |Im p#| at t_mp

  double density(double t) const;
  /// int_{-inf}^{t} P_sd0.
  double cumulative(double t) const;
  TimeDistribution distribution(const std::vector<double>& times) const;
};

/// Builds the frozen model for the tunnelling saddle.
FrozenModel frozen_model(const PacketSpec& packet, const BarrierSpec& barrier);
FrozenModel frozen_model(const SaddlePoint& most_probable, const PacketSpec& packet, const BarrierSpec& barrier);

}  // namespace dtt
