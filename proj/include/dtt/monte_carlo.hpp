#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dtt/first_click.hpp"
#include "dtt/time_distribution.hpp"

namespace dtt {

/// Philox4x32-10 counter-based generator: a keyed
/// bijection of 128-bit counters.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter ctr, Key key);
};

/// Independent stream `stream` of the generator keyed by `seed`; satisfies
/// UniformRandomBitGenerator. Word i of the stream is word (i mod 4) of the
/// block at counter (i / 4, 0, stream_lo, stream_hi).
class PhiloxStream {
 public:
  using result_type = std::uint32_t;
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buf_{};
  int used_ = 4;
};

/// Inverse of the normalised cumulative u -> t with C(t) = u C_trans,
/// consistent with the piecewise-linear density of the distribution.
class InverseCdf {
 public:
  /// Throws SamplingError when the cumulative decreases or the mass is not
  /// positive.
  explicit InverseCdf(const TimeDistribution& source);
  double operator()(double u) const;

 private:
  const TimeDistribution& d_;
};

struct McResult {
  std::vector<double> click_times;  ///< first-click time of every trial that clicked
  std::size_t no_click = 0;
  std::size_t n_trials = 0;
  double no_click_fraction() const { return static_cast<double>(no_click) / static_cast<double>(n_trials); }
};

/// Largest N simulated as N literal Bernoulli draws; larger N draw the
/// detection count from a binomial and the earliest of those arrivals
/// directly.
inline constexpr double kLiteralTrialLimit = 1e4;

/// Per trial: N Bernoulli(C_trans) detections, each with an arrival time
/// drawn from the normalised source; records the earliest or "no click".
/// Trial i uses stream i, so results are independent of the thread count.
McResult monte_carlo_first_click(const FirstClickSpec& spec, std::size_t n_trials, std::uint64_t seed,
                                 bool parallel = true);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int bins = 0;
};

/// Pearson test of the click times and the no-click count against a model
/// CDF of the first click (cdf(t) = P(click <= t)). Bins hold equal model
/// probability between t_lo and t_hi.
ChiSquare chi_square_first_click(const McResult& mc, const std::function<double(double)>& cdf,
                                 double p_no_click, double t_lo, double t_hi, int bins);

}  // namespace dtt
