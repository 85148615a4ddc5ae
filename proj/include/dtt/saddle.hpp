#pragma once

#include <string>
#include <vector>

#include "dtt/barrier.hpp"
#include "dtt/kinematics.hpp"
#include "dtt/time_distribution.hpp"

namespace dtt {

/// F(p, t) = -i (-(p - p0)^2 / 2 Gamma + ln T(p) + i p D) - E(p) t with its
/// first two p-derivatives, D = z2 - z0 the source-detector distance.
struct Action {
  cplx F;
  cplx Fp;
  cplx Fpp;
};

Action action(cplx p, double t, const PacketSpec& packet, const BarrierSpec& barrier);

/// One point of a saddle path p#(t).
struct SaddlePoint {
  double t = 0.0;
  cplx p;
  cplx F;
  cplx Fpp;
  cplx tau;  ///< full phase time tau(p#), including the free flight
  cplx v;
  double residual = 0.0;  ///< |dF/dp| at p#
  int iterations = 0;
  bool converged = false;
};

struct SaddleOptions {
  int max_iterations = 100;
  double tolerance = 1e-12;
  /// Accepted when Newton stalls at rounding level above `tolerance`.
  double stall_tolerance = 1e-10;
};

/// Damped Newton iteration on dF/dp = 0 from `guess`. Throws
/// ConvergenceError (with the last residual) after max_iterations.
SaddlePoint solve_saddle(double t, cplx guess, const PacketSpec& packet, const BarrierSpec& barrier,
                         const SaddleOptions& options = {});

/// Real-axis saddle of the tunnelling branch: the first root of
/// (p - p0) / Gamma = Re dlnT/dp met when walking from p0 in the direction
/// momentum filtering pushes. Throws DomainError when that root does not lie
/// in the tunnelling window |E - V| < 1.
double real_axis_saddle(const PacketSpec& packet, const BarrierSpec& barrier);

/// Most probable time: the root of Im p#(t) = 0, bracketed around
/// Re tau(real-axis saddle) and refined with TOMS 748.
SaddlePoint most_probable_saddle(const PacketSpec& packet, const BarrierSpec& barrier,
                                 const SaddleOptions& options = {});

struct SaddleTrace {
  std::vector<SaddlePoint> points;  ///< ascending in t, only converged points
  std::vector<std::string> warnings;
};

/// Follows p#(t) from `start` to every requested time (sorted ascending),
/// sweeping outward in both directions with an Euler predictor
/// dp#/dt = v / F_pp and an adaptive step (initial `initial_step`, halved on
/// failure). Times beyond a failure are dropped with a warning.
SaddleTrace continue_saddle(const SaddlePoint& start, const std::vector<double>& times,
                            const PacketSpec& packet, const BarrierSpec& barrier, double initial_step,
                            const SaddleOptions& options = {});

/// Steepest-descent spinor at the detector, psi = K sqrt(2 pi / (-i F_pp))
/// u(p#) exp(i F); `branch` holds the square root continued from the
/// previous trace point (pass {} to take the principal root).
Spinor sda_spinor(const SaddlePoint& s, const PacketSpec& packet, cplx& branch);

/// P_sd(t) = 2 Re(conj(psi_0) psi_1) = 4 pi K^2 Re u1(p#) exp(-2 Im F) / |F_pp|.
double sda_flux(const SaddlePoint& s, const PacketSpec& packet);

struct SdaResult {
  TimeDistribution distribution;
  SaddleTrace trace;
  SaddlePoint most_probable;
};

/// P_sd on the requested times (truncated where continuation fails).
SdaResult sda_distribution(const std::vector<double>& times, const PacketSpec& packet, const BarrierSpec& barrier,
                           const SaddleOptions& options = {});

struct TauSample {
  double t;
  double re_tau;
  double im_tau;
};

struct TauTrace {
  std::vector<TauSample> samples;
  double t_mp = 0.0;
  double re_tau_mp = 0.0;
  double t_im_min = 0.0;  ///< sample time of the smallest Im tau#
  std::vector<std::string> warnings;
};

TauTrace tau_sharp_trace(const std::vector<double>& times, const PacketSpec& packet, const BarrierSpec& barrier);

struct TauMap {
  double re_lo, re_hi, im_lo, im_hi;
  std::size_t nx, ny;
  std::vector<double> re_tau;  ///< row-major, ny rows of nx values (NaN where undefined)
  std::vector<cplx> path;      ///< p#(t) sampled every `path_spacing` in t
  std::vector<double> path_times;

  double at(std::size_t ix, std::size_t iy) const { return re_tau[iy * nx + ix]; }
  double x(std::size_t ix) const;
  double y(std::size_t iy) const;
};

/// Re tau(p) (full free path included) on a rectangle of the complex p plane
/// with the saddle path overlaid.
TauMap tau_contour_map(double re_lo, double re_hi, double im_lo, double im_hi, std::size_t nx, std::size_t ny,
                       const PacketSpec& packet, const BarrierSpec& barrier, double path_t0, double path_t1,
                       double path_spacing = 10.0);

}  // namespace dtt
