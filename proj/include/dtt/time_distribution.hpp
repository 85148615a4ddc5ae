#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dtt {

/// A sampled arrival-time density P(t) with its running integral C(t), the
/// complement C~(t) = 1 - C(t) (the reflected mass is folded into C~ as an
/// explicit scalar, never as a sampled spike), and the transmitted mass
/// C_trans = C(t_max).
///
/// Between samples the density is treated as linear, so C(t) is the
/// trapezoid integral at the nodes and piecewise quadratic in between.
struct TimeDistribution {
  std::vector<double> times;
  std::vector<double> density;
  std::vector<double> cumulative;
  std::vector<double> tail;
  double total = 0.0;  ///< C_trans
  double floor = 0.0;  ///< magnitude below which density values are noise
  std::string label;

  static TimeDistribution from_density(std::vector<double> times, std::vector<double> density,
                                       double floor = 0.0, std::string label = {});
  /// For sources whose running integral is known in closed form; `total` is
  /// the mass at t -> infinity.
  static TimeDistribution from_density_and_cumulative(std::vector<double> times, std::vector<double> density,
                                                      std::vector<double> cumulative, double total,
                                                      double floor = 0.0, std::string label = {});

  std::size_t size() const { return times.size(); }
  double density_at(double t) const;
  double cumulative_at(double t) const;
  /// Earliest time at which C(t) reaches `level`, if it does.
  std::optional<double> time_at_cumulative(double level) const;
  /// Sample time of the largest density value.
  double peak_time() const;
};

}  // namespace dtt
