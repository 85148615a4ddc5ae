#pragma once

#include <string>
#include <vector>

#include "dtt/barrier.hpp"
#include "dtt/kinematics.hpp"

namespace dtt {

/// Parameters of the momentum grid. Node density is `refinement_ratio` times
/// the background inside each band |q| < `q_band` around a critical
/// momentum, with tanh shoulders of width (band length) / `shoulder_divisor`.
struct GridOptions {
  double half_width_sigmas = 12.0;  ///< window p0 +- this many sqrt(Gamma)
  double refinement_ratio = 20.0;
  double q_band = 0.2;
  double shoulder_divisor = 8.0;
};

struct DenseBand {
  double centre = 0.0;  ///< critical momentum
  double lower = 0.0;
  double upper = 0.0;
  double shoulder = 0.0;
};

struct MomentumGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lower = 0.0;
  double upper = 0.0;
  double refinement_ratio = 1.0;
  std::vector<DenseBand> bands;

  std::size_t size() const { return nodes.size(); }
  double length() const { return upper - lower; }
  /// Relative node density at p (1 in the background).
  double density(double p) const;
  /// Human-readable summary of the densification.
  std::string density_profile() const;
};

/// Builds a mapped-trapezoid grid of `n_points` nodes on the packet window
/// united with the critical-point bands. Nodes are the images of a uniform
/// grid under the inverse of the cumulative node density, and each weight is
/// the exact Jacobian of that map, so the rule stays spectrally accurate for
/// smooth integrands that vanish at the window edges.
///
/// Throws ConfigError when n_points < 1000 or the window reaches p <= 0.
MomentumGrid build_grid(const PacketSpec& packet, const BarrierSpec& barrier, std::size_t n_points,
                        const GridOptions& options = {});

}  // namespace dtt
