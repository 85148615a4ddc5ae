#include "dtt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dtt/error.hpp"

namespace dtt {

namespace {

constexpr double kShoulderMargin = 16.0;  // shoulders beyond the window edge
constexpr double kMinShoulderSteps = 8.0;

double momentum_at_energy(double E) { return std::sqrt(E * E - 1.0); }

std::vector<DenseBand> critical_bands(const BarrierSpec& barrier, const GridOptions& options) {
  std::vector<DenseBand> bands;
  const double inner = std::sqrt(1.0 - options.q_band * options.q_band);
  const double outer = std::sqrt(1.0 + options.q_band * options.q_band);
  for (double sign : {-1.0, 1.0}) {
    const double Ec = barrier.v_top + sign;
    const double lo = barrier.v_top + sign * (sign > 0 ? inner : outer);
    const double hi = barrier.v_top + sign * (sign > 0 ? outer : inner);
    if (lo <= 1.0) continue;
    DenseBand b;
    b.centre = momentum_at_energy(Ec);
    b.lower = momentum_at_energy(lo);
    b.upper = momentum_at_energy(hi);
    b.shoulder = (b.upper - b.lower) / options.shoulder_divisor;
    bands.push_back(b);
  }
  return bands;
}

}  // namespace

double MomentumGrid::density(double p) const {
  double rho = 1.0;
  for (const auto& b : bands)
    rho += (refinement_ratio - 1.0) * 0.5 *
           (std::tanh((p - b.lower) / b.shoulder) - std::tanh((p - b.upper) / b.shoulder));
  return rho;
}

std::string MomentumGrid::density_profile() const {
  std::string out = "window [" + std::to_string(lower) + ", " + std::to_string(upper) + "]";
  for (const auto& b : bands) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "; x%.3g band [%.6f, %.6f] around %.6f (shoulder %.3g)",
                  refinement_ratio, b.lower, b.upper, b.centre, b.shoulder);
    out += buf;
  }
  return out;
}

MomentumGrid build_grid(const PacketSpec& packet, const BarrierSpec& barrier, std::size_t n_points,
                        const GridOptions& options) {
  if (n_points < 1000) throw ConfigError("grid.n_points", "at least 1000 grid points are required");
  if (!(options.refinement_ratio >= 1.0))
    throw ConfigError("grid.refinement_ratio", "refinement ratio must be >= 1");

  MomentumGrid g;
  g.refinement_ratio = options.refinement_ratio;
  g.bands = critical_bands(barrier, options);
  const double half = options.half_width_sigmas * packet.sqrt_gamma();
  const double R1 = options.refinement_ratio - 1.0;
  auto set_window = [&] {
    g.lower = packet.p0 - half;
    g.upper = packet.p0 + half;
    for (const auto& b : g.bands) {
      g.lower = std::min(g.lower, b.lower - kShoulderMargin * b.shoulder);
      g.upper = std::max(g.upper, b.upper + kShoulderMargin * b.shoulder);
    }
  };
  set_window();
  // Shoulders narrower than a few background steps are not resolved by the
  // mapped rule; widen them on coarse grids.
  double stretched = g.upper - g.lower;
  for (const auto& b : g.bands) stretched += R1 * (b.upper - b.lower);
  const double min_shoulder = kMinShoulderSteps * stretched / static_cast<double>(n_points - 1);
  for (auto& b : g.bands) b.shoulder = std::max(b.shoulder, min_shoulder);
  set_window();
  if (g.lower <= 0.0)
    throw ConfigError("packet.width", "momentum window reaches p <= 0; the packet is too wide");

  // The node map is inverted in long double: a node displaced from its
  // trapezoid abscissa by dp perturbs the oscillatory sum by about
  // |d(phase)/dp| dp relative, which sets the cancellation floor.
  using ld = long double;
  auto log_cosh_l = [](ld x) {
    const ld a = std::fabs(x);
    return a + std::log1p(std::exp(-2.0L * a)) - std::log(2.0L);
  };
  auto density_l = [&](ld p) {
    ld rho = 1.0L;
    for (const auto& b : g.bands)
      rho += static_cast<ld>(R1) * 0.5L *
             (std::tanh((p - b.lower) / b.shoulder) - std::tanh((p - b.upper) / b.shoulder));
    return rho;
  };
  auto cumulative = [&](ld p) {
    ld phi = p - g.lower;
    for (const auto& b : g.bands) {
      const ld s = b.shoulder;
      phi += static_cast<ld>(R1) * 0.5L * s *
             (log_cosh_l((p - b.lower) / s) - log_cosh_l((p - b.upper) / s) -
              log_cosh_l((g.lower - b.lower) / s) + log_cosh_l((g.lower - b.upper) / s));
    }
    return phi;
  };
  const ld total = cumulative(g.upper);
  const ld ds_l = total / static_cast<ld>(n_points - 1);
  const double ds = static_cast<double>(ds_l);

  g.nodes.resize(n_points);
  g.weights.resize(n_points);
  g.nodes.front() = g.lower;
  g.nodes.back() = g.upper;
  ld p = g.lower;
  for (std::size_t i = 1; i + 1 < n_points; ++i) {
    const ld target = ds_l * static_cast<ld>(i);
    p += ds_l / density_l(p);
    for (int it = 0; it < 20; ++it) {
      const ld step = (cumulative(p) - target) / density_l(p);
      p -= step;
      if (std::fabs(step) <= 1e-18L * p) break;
    }
    g.nodes[i] = static_cast<double>(p);
  }
  for (std::size_t i = 0; i < n_points; ++i) g.weights[i] = ds / g.density(g.nodes[i]);
  g.weights.front() *= 0.5;
  g.weights.back() *= 0.5;
  return g;
}

}  // namespace dtt
