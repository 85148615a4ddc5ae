// Acceptance run: one PASS/FAIL line per criterion, then the tally.
// Exits non-zero only when a criterion cannot be evaluated at all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "dtt/barrier.hpp"
#include "dtt/config.hpp"
#include "dtt/first_click.hpp"
#include "dtt/frozen.hpp"
#include "dtt/grid.hpp"
#include "dtt/monte_carlo.hpp"
#include "dtt/propagator.hpp"
#include "dtt/saddle.hpp"
#include "oracles.hpp"

using namespace dtt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

TimeDistribution gaussian_source(const oracle::Gaussian& g, double step) {
  const auto t = time_range(g.mu - 14 * g.s, g.mu + 14 * g.s, step);
  std::vector<double> P(t.size()), C(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    P[i] = g.density(t[i]);
    C[i] = g.cumulative(t[i]);
  }
  return TimeDistribution::from_density_and_cumulative(t, P, C, g.c);
}

FluxResult exact_run(const RunConfig& c, std::size_t n_points) {
  const MomentumGrid grid = build_grid(c.packet_spec(), c.barrier_spec(), n_points, c.grid_options());
  return flux_distribution(grid, c.packet_spec(), c.barrier_spec(), c.time_grid());
}

Verdict mass_identity() {
  const auto t0 = Clock::now();
  const oracle::Gaussian g{0.05, 100.0, 10.0};
  const TimeDistribution src = gaussian_source(g, g.s / 2000.0);
  double worst = 0.0, worst_exact = 0.0;
  for (double N : {1.0, 10.0, 1e3, 1e6}) {
    const FirstClickSpec spec = make_first_click_spec(N, src);
    const FirstClickResult r = first_click_density(spec, FirstClickForm::Poisson);
    const double ref = -std::expm1(-N * g.c);
    worst = std::max(worst, std::abs(static_cast<double>(oracle::trapezoid(r.times, r.density)) - ref) / ref);
    // Finite-N form against its own closed mass 1 - (1 - C)^N.
    const FirstClickResult e = first_click_density(spec, FirstClickForm::Exact);
    const double ref_e = 1.0 - std::pow(1.0 - g.c, N);
    worst_exact = std::max(worst_exact, std::abs(static_cast<double>(oracle::trapezoid(e.times, e.density)) - ref_e) / ref_e);
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && worst_exact <= 1e-8 && secs < 60.0,
          fmt::format("1 - exp(-N C): max rel err {:.2e}; 1 - (1 - C)^N: max rel err {:.2e} (tol 1e-8), {:.2f} s "
                      "(limit 60 s)",
                      worst, worst_exact, secs)};
}

Verdict monte_carlo_oracle() {
  const auto t0 = Clock::now();
  const oracle::Gaussian g{0.05, 100.0, 10.0};
  const double N = 200.0;
  const TimeDistribution src = gaussian_source(g, 0.01);
  const McResult mc = monte_carlo_first_click(make_first_click_spec(N, src), 1000000, 1);
  auto cdf = [&](double t) { return -std::expm1(N * std::log1p(-g.cumulative(t))); };
  const ChiSquare chi = chi_square_first_click(mc, cdf, std::pow(1.0 - g.c, N), g.mu - 14 * g.s, g.mu + 14 * g.s, 20);
  const double secs = seconds_since(t0);
  return {chi.p_value > 0.01 && secs < 300.0,
          fmt::format("chi2 {:.2f} on {} dof, p = {:.3f} (need > 0.01), {:.1f} s (limit 300 s)", chi.statistic,
                      chi.dof, chi.p_value, secs)};
}

Verdict transmission_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int n = 0;
  for (const std::string name : {"fig1-top", "fig1-bottom"}) {
    const RunConfig c = preset(name);
    const PacketSpec pk = c.packet_spec();
    const BarrierSpec b = c.barrier_spec();
    const double s = pk.sqrt_gamma();
    for (int k = 0; k < 50; ++k) {
      const double p = pk.p0 - 8 * s + 16 * s * (k + 0.5) / 50.0;
      const double T2 = std::norm(transmission_amplitude(cplx{p}, b));
      const long double E = std::sqrt(static_cast<long double>(p) * p + 1.0L);
      const double ref = static_cast<double>(std::norm(oracle::transfer_matrix_T(E, b.v_top, b.width())));
      worst = std::max(worst, std::abs(T2 - ref) / ref);
      ++n;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 1.0,
          fmt::format("{} energies, max rel err {:.2e} (tol 1e-10), {:.3f} s (limit 1 s)", n, worst, secs)};
}

Verdict frozen_internals() {
  const RunConfig c = preset("fig1-bottom");
  const FrozenModel m = frozen_model(c.packet_spec(), c.barrier_spec());
  auto f = [&](double t) { return m.density(t); };
  const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, m.t_mp - 40 * m.delta_t, m.t_mp + 40 * m.delta_t, 15, 1e-15);
  const double mass_err = std::abs(total - m.C_sd0) / m.C_sd0;
  const bool argmax_ok = click_shape_argmax() == 1.0 && click_shape(1.0 + 1e-6) < click_shape(1.0) &&
                         click_shape(1.0 - 1e-6) < click_shape(1.0);
  const double width = click_shape_log_curvature_width(1.0);
  const double tol = 16 * std::numeric_limits<double>::epsilon();
  const bool width_ok = std::abs(width - std::exp(0.5)) <= tol * std::exp(0.5);
  return {mass_err <= 1e-10 && argmax_ok && width_ok,
          fmt::format("mass rel err {:.2e} (tol 1e-10); argmax at 1: {}; log-curvature width {:.17g} vs e^0.5 "
                      "{:.17g} ({}); curvature width {:.17g}",
                      mass_err, argmax_ok ? "yes" : "no", width, std::exp(0.5), width_ok ? "match" : "mismatch",
                      click_shape_curvature_width(1.0))};
}

Verdict photon_benchmark() {
  const RunConfig c = preset("fig1-bottom");
  const TimeDistribution d = photon_distribution(c.packet_spec(), c.distance(), c.time_grid());
  const double peak = d.peak_time();
  return {std::abs(peak - 128.0) <= 0.5 * c.times.step,
          fmt::format("peak at {:.4f} (target 128 +- {})", peak, 0.5 * c.times.step)};
}

Verdict hartman_saturation() {
  const auto t0 = Clock::now();
  const RunConfig c = preset("fig1-top");
  auto sigma = [&](double l) { return frozen_model(c.packet_spec(), make_barrier(c.barrier.height, c.packet.offset, l)).sigma_mp; };
  const double s8 = sigma(8.0), s12 = sigma(12.0), s20 = sigma(20.0), s24 = sigma(24.0);
  const double wide = std::abs(s24 - s20) / std::abs(s20);
  const double narrow = std::abs(s12 - s8) / std::abs(s8);
  const double secs = seconds_since(t0);
  return {wide < 0.02 && narrow > 0.10 && secs < 600.0,
          fmt::format("sigma_mp(8,12,20,24) = {:.5f} {:.5f} {:.5f} {:.5f}; 20->24 {:.2f}% (need < 2%), 8->12 {:.2f}% "
                      "(need > 10%), {:.2f} s",
                      s8, s12, s20, s24, 100 * wide, 100 * narrow, secs)};
}

Verdict early_fading() {
  const RunConfig c = preset("fig1-bottom");
  const TauTrace tr = tau_sharp_trace(time_range(0.0, 200.0, 0.5), c.packet_spec(), c.barrier_spec());
  if (tr.samples.empty() || tr.samples.front().t != 0.0) return {false, "tau trace does not reach t = 0"};
  const double early = tr.samples.front().re_tau;
  const double target = 128.0 / 0.998;
  return {std::abs(early - target) <= 0.5 && tr.re_tau_mp < 128.0,
          fmt::format("Re tau(0) = {:.4f} (target {:.4f} +- 0.5), Re tau(t_mp) = {:.4f} (need < 128)", early, target,
                      tr.re_tau_mp)};
}

Verdict no_crossing(std::vector<std::string>& report) {
  bool pass = true;
  std::string detail;
  for (const std::string name : {"fig1-top", "fig1-bottom"}) {
    const auto t0 = Clock::now();
    const RunConfig c = preset(name);
    const FluxResult r = exact_run(c, c.grid.n_points);
    const TimeDistribution& P = r.distribution;
    const TimeDistribution Pg = photon_distribution(c.packet_spec(), c.distance(), P.times);
    const double peak_g = Pg.peak_time();
    std::size_t checked = 0, violations = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < P.size(); ++i) {
      if (P.times[i] >= peak_g || Pg.density[i] <= P.floor) continue;
      ++checked;
      lowest = std::min(lowest, Pg.density[i]);
      if (!(P.density[i] < Pg.density[i])) ++violations;
    }
    const FirstClickResult fe = first_click_density(make_first_click_spec(c.N, P));
    const FirstClickResult fg = first_click_density(make_first_click_spec(c.N, Pg));
    const bool floor_ok = P.floor <= 1e-26;
    const bool ok = violations == 0 && checked > 0 && fg.t_peak < fe.t_peak && floor_ok;
    pass = pass && ok;
    report.push_back(fmt::format("{}: grid {} ext, floor {:.3e}, {:.1f} s", name, c.grid.n_points, P.floor,
                                 seconds_since(t0)));
    detail += fmt::format("[{}: floor {:.2e} (need <= 1e-26), {} samples down to P_gamma = {:.2e}, {} crossings; "
                          "first-click peaks photon {:.2f} < electron {:.2f}] ",
                          name, P.floor, checked, lowest, violations, fg.t_peak, fe.t_peak);
  }
  return {pass, detail};
}

Verdict crossover_dichotomy() {
  const RunConfig c = preset("fig1-bottom");
  const PacketSpec pk = c.packet_spec();
  const BarrierSpec b = c.barrier_spec();
  const FrozenModel m = frozen_model(pk, b);
  const auto n_frozen = frozen_crossover(m, m.C_sd0, c.distance());
  const SdaResult sda = sda_distribution(c.time_grid(), pk, b);
  const TimeDistribution photon = photon_distribution(pk, c.distance(), c.time_grid());
  const CrossoverScan scan = distribution_crossover(sda.distribution, photon, 1e24);
  const bool ok = n_frozen.has_value() && std::isfinite(*n_frozen) && !scan.crossover_n && scan.evaluated > 0;
  return {ok, fmt::format("frozen N* = {}; per-time SDA crossover up to 1e24: {} ({} N values, min lead {:.3f} at N = "
                          "{:.2e})",
                          n_frozen ? fmt::format("{:.3e}", *n_frozen) : std::string("none"),
                          scan.crossover_n ? fmt::format("at {:.3e}", *scan.crossover_n) : std::string("none"),
                          scan.evaluated, scan.min_lead, scan.n_at_min)};
}

Verdict sda_fidelity(std::vector<std::string>& report) {
  const auto t0 = Clock::now();
  const RunConfig c = preset("fig1-bottom");
  const FluxResult r = exact_run(c, 100000);
  const SdaResult sda = sda_distribution(c.time_grid(), c.packet_spec(), c.barrier_spec());
  const double t_mp = sda.most_probable.t;
  const TimeDistribution& P = r.distribution;
  std::size_t checked = 0, bad = 0;
  double worst = 0.0, t_worst = 0.0, first_bad = std::numeric_limits<double>::quiet_NaN();
  for (const SaddlePoint& s : sda.trace.points) {
    if (s.t > t_mp) break;
    const auto it = std::lower_bound(P.times.begin(), P.times.end(), s.t);
    if (it == P.times.end() || *it != s.t) continue;
    const double exact = P.density[static_cast<std::size_t>(it - P.times.begin())];
    if (!(exact > 1e3 * P.floor)) continue;
    ++checked;
    const double rel = std::abs(sda_flux(s, c.packet_spec()) - exact) / exact;
    if (rel > worst) {
      worst = rel;
      t_worst = s.t;
    }
    if (rel > 0.05) {
      ++bad;
      if (std::isnan(first_bad)) first_bad = s.t;
    }
  }
  const double secs = seconds_since(t0);
  report.push_back(fmt::format("sda fidelity: grid 100000 ext, floor {:.3e}, {:.1f} s", P.floor, secs));
  return {checked > 0 && bad == 0 && secs < 1800.0,
          fmt::format("{} samples with P > 1e3 floor and t <= t_mp = {:.3f}; {} outside 5% (first at t = {}); max rel "
                      "dev {:.3f} at t = {:.1f}; {:.1f} s (limit 1800 s)",
                      checked, t_mp, bad, std::isnan(first_bad) ? std::string("none") : fmt::format("{:.1f}", first_bad),
                      worst, t_worst, secs)};
}

}  // namespace

int main() {
  std::vector<std::string> report;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"mass identity", mass_identity},
      {"Monte Carlo equivalence", monte_carlo_oracle},
      {"transmission oracle", transmission_oracle},
      {"frozen-model internals", frozen_internals},
      {"photon benchmark", photon_benchmark},
      {"phase-time saturation", hartman_saturation},
      {"early-time fading", early_fading},
      {"no crossing", [&] { return no_crossing(report); }},
      {"crossover dichotomy", crossover_dichotomy},
      {"steepest-descent fidelity", [&] { return sda_fidelity(report); }},
  };
  int met = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      std::printf("criterion %d (%s): ERROR %s\n", k, name.c_str(), e.what());
      std::fflush(stdout);
      return 1;
    }
    met += v.pass ? 1 : 0;
    std::printf("criterion %d (%s): %s  %s\n", k, name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  for (const auto& line : report) std::printf("run: %s\n", line.c_str());
  std::printf("%d/10 met\n", met);
  return 0;
}
