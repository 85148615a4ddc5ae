#include "dtt/runs.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>

#include "dtt/error.hpp"
#include "dtt/first_click.hpp"
#include "dtt/frozen.hpp"
#include "dtt/grid.hpp"
#include "dtt/monte_carlo.hpp"
#include "dtt/propagator.hpp"
#include "dtt/saddle.hpp"

namespace dtt {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Rethrows library errors with the name of the stage that raised them;
// configuration errors keep their field-level message and type.
template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(std::string(stage) + ": " + e.what());
  }
}

std::string path_in(const RunConfig& c, const std::string& name) {
  return (fs::path(c.outputs.directory) / name).string();
}

std::string num(double x) { return format_number(x); }

FluxResult compute_exact(const RunConfig& c) {
  return staged("exact", [&] {
    const PacketSpec packet = c.packet_spec();
    const BarrierSpec barrier = c.barrier_spec();
    const MomentumGrid grid = build_grid(packet, barrier, c.grid.n_points, c.grid_options());
    FluxOptions o;
    o.precision = c.precision_mode();
    return flux_distribution(grid, packet, barrier, c.time_grid(), o);
  });
}

// Values of `d` on `times`, NaN where `d` has no sample.
std::vector<double> aligned(const std::vector<double>& times, const std::vector<double>& t,
                            const std::vector<double>& values) {
  std::map<double, double> at;
  for (std::size_t i = 0; i < t.size(); ++i) at[t[i]] = values[i];
  std::vector<double> out(times.size(), kNaN);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (const auto it = at.find(times[i]); it != at.end()) out[i] = it->second;
  return out;
}

void add_distribution_columns(Table& t, const TimeDistribution& d) {
  t.columns = {"time", "density", "cumulative", "tail"};
  t.data = {d.times, d.density, d.cumulative, d.tail};
  t.header.set("density_column", "density");
  t.header.set("C_trans", d.total);
}

void emit(RunOutput& out, const std::string& path) { out.files.push_back(path); }

}  // namespace

Header base_header(const RunConfig& config, double floor) {
  Header h;
  h.set("config_hash", config_hash(config));
  h.set("precision", to_string(config.precision_mode()));
  h.set("floor", floor);
  h.set("preset", config.name);
  return h;
}

std::string write_manifest(const RunConfig& config) {
  const std::string path = path_in(config, "config.txt");
  fs::create_directories(config.outputs.directory);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize(config);
  return path;
}

RunOutput run_exact(const RunConfig& config) {
  validate(config);
  RunOutput out;
  emit(out, write_manifest(config));
  const FluxResult r = compute_exact(config);
  const TimeDistribution& d = r.distribution;
  out.warnings = r.warnings;

  Header h = base_header(config, d.floor);
  h.set("distance", config.distance());
  h.set("floor_rule", "median |density| for t < 0.5 distance");
  h.set("cumulative_rule", "trapezoid");
  h.set("grid_points", std::to_string(config.grid.n_points));
  h.set("C_trans_momentum", r.momentum_mass);
  h.set("truncated_mass", r.truncated_mass);

  if (config.wants("csv")) {
    Table t;
    t.header = h;
    add_distribution_columns(t, d);
    write_table(path_in(config, "exact.csv"), t);
    emit(out, path_in(config, "exact.csv"));
  }
  if (config.wants("svg")) {
    const TimeDistribution photon = photon_distribution(config.packet_spec(), config.distance(), d.times);
    Plot p;
    p.title = "Transmission time distribution at the detector";
    p.x_label = "t (lambda-bar/c)";
    p.y_label = "P(t) (c/lambda-bar)";
    p.log_y = true;
    p.floor = d.floor;
    p.series.push_back({"P exact", d.times, d.density, "#1f77b4", 1.8, false});
    p.series.push_back({"P photon", photon.times, photon.density, "#2ca02c", 1.2, true});
    write_svg_plot(path_in(config, "exact.svg"), p, h);
    emit(out, path_in(config, "exact.svg"));
  }
  out.summary = {{"C_trans", num(d.total)},
                 {"C_trans_momentum", num(r.momentum_mass)},
                 {"truncated_mass", num(r.truncated_mass)},
                 {"floor", num(d.floor)},
                 {"peak_time", num(d.peak_time())},
                 {"photon_peak_time", num(config.distance())},
                 {"precision", to_string(r.precision)}};
  for (const auto& w : r.warnings) out.summary.emplace_back("warning", w);
  write_summary(path_in(config, "exact_summary.txt"), h, out.summary);
  emit(out, path_in(config, "exact_summary.txt"));
  return out;
}

RunOutput run_sda(const RunConfig& config) {
  validate(config);
  RunOutput out;
  emit(out, write_manifest(config));
  const PacketSpec packet = config.packet_spec();
  const BarrierSpec barrier = config.barrier_spec();
  const SdaResult r = staged("sda", [&] { return sda_distribution(config.time_grid(), packet, barrier); });
  const TimeDistribution& d = r.distribution;
  out.warnings = r.trace.warnings;

  Header h = base_header(config, 0.0);
  h.set("cumulative_rule", "trapezoid");
  h.set("t_mp", r.most_probable.t);

  std::vector<double> re_p, im_p, re_tau, im_tau, residual;
  for (const auto& s : r.trace.points) {
    re_p.push_back(s.p.real());
    im_p.push_back(s.p.imag());
    re_tau.push_back(s.tau.real());
    im_tau.push_back(s.tau.imag());
    residual.push_back(s.residual);
  }
  if (config.wants("csv")) {
    Table t;
    t.header = h;
    add_distribution_columns(t, d);
    t.columns.insert(t.columns.end(), {"re_p", "im_p", "re_tau", "im_tau", "residual"});
    t.data.insert(t.data.end(), {re_p, im_p, re_tau, im_tau, residual});
    write_table(path_in(config, "sda.csv"), t);
    emit(out, path_in(config, "sda.csv"));

    Table tt;
    tt.header = h;
    tt.columns = {"time", "re_tau", "im_tau"};
    tt.data = {d.times, re_tau, im_tau};
    write_table(path_in(config, "tau_trace.csv"), tt);
    emit(out, path_in(config, "tau_trace.csv"));
  }
  if (config.wants("svg")) {
    Plot p;
    p.title = "Steepest-descent transmission time distribution";
    p.x_label = "t (lambda-bar/c)";
    p.y_label = "P_sd(t) (c/lambda-bar)";
    p.log_y = true;
    p.series.push_back({"P_sd", d.times, d.density, "#d62728", 1.8, false});
    write_svg_plot(path_in(config, "sda.svg"), p, h);
    emit(out, path_in(config, "sda.svg"));

    Plot q;
    q.title = "Real part of the saddle phase time";
    q.x_label = "t (lambda-bar/c)";
    q.y_label = "Re tau# (lambda-bar/c)";
    q.series.push_back({"Re tau#", d.times, re_tau, "#1f77b4", 1.8, false});
    q.markers.push_back({r.most_probable.t, r.most_probable.tau.real(), "t_mp"});
    write_svg_plot(path_in(config, "tau_trace.svg"), q, h);
    emit(out, path_in(config, "tau_trace.svg"));
  }
  double max_residual = 0.0;
  for (double x : residual) max_residual = std::max(max_residual, x);
  out.summary = {{"t_mp", num(r.most_probable.t)},
                 {"p_mp_re", num(r.most_probable.p.real())},
                 {"p_mp_im", num(r.most_probable.p.imag())},
                 {"re_tau_mp", num(r.most_probable.tau.real())},
                 {"im_tau_mp", num(r.most_probable.tau.imag())},
                 {"re_tau_first", num(re_tau.front())},
                 {"t_first", num(d.times.front())},
                 {"C_sd", num(d.total)},
                 {"points", std::to_string(d.size())},
                 {"max_residual", num(max_residual)}};
  for (const auto& w : out.warnings) out.summary.emplace_back("warning", w);
  write_summary(path_in(config, "sda_summary.txt"), h, out.summary);
  emit(out, path_in(config, "sda_summary.txt"));
  return out;
}

RunOutput run_frozen(const RunConfig& config) {
  validate(config);
  RunOutput out;
  emit(out, write_manifest(config));
  const PacketSpec packet = config.packet_spec();
  const BarrierSpec barrier = config.barrier_spec();
  const FrozenModel m = staged("frozen", [&] { return frozen_model(packet, barrier); });
  const TimeDistribution d = m.distribution(config.time_grid());

  Header h = base_header(config, 0.0);
  h.set("cumulative_rule", "analytic");
  if (config.wants("csv")) {
    Table t;
    t.header = h;
    add_distribution_columns(t, d);
    write_table(path_in(config, "frozen.csv"), t);
    emit(out, path_in(config, "frozen.csv"));
  }
  if (config.wants("svg")) {
    Plot p;
    p.title = "Frozen Gaussian model";
    p.x_label = "t (lambda-bar/c)";
    p.y_label = "P_sd0(t) (c/lambda-bar)";
    p.log_y = true;
    p.series.push_back({"P_sd0", d.times, d.density, "#9467bd", 1.8, false});
    write_svg_plot(path_in(config, "frozen.svg"), p, h);
    emit(out, path_in(config, "frozen.svg"));
  }
  out.summary = {{"t_mp", num(m.t_mp)},
                 {"delta_t", num(m.delta_t)},
                 {"delta_t_gamma0", num(m.delta_t_gamma0)},
                 {"delta_t_curvature", num(m.delta_t_curvature)},
                 {"C_sd0", num(m.C_sd0)},
                 {"Delta_re", num(m.Delta_mp.real())},
                 {"Delta_im", num(m.Delta_mp.imag())},
                 {"sigma_mp", num(m.sigma_mp)},
                 {"p_mp", num(m.p_mp)},
                 {"im_p_residual", num(m.im_p_residual)},
                 {"N", num(config.N)}};
  try {
    const FirstClickTiming timing = mean_first_click_time(m, config.N);
    const FirstClickWidth width = first_click_width(m, config.N);
    out.summary.insert(out.summary.end(), {{"t_1st", num(timing.t_1st)},
                                           {"t_1st_leading", num(timing.t_1st_leading)},
                                           {"t_1st_implicit", num(timing.t_1st_implicit)},
                                           {"delta_t_1st", num(width.closed)},
                                           {"delta_t_1st_general", num(width.general)}});
    const PhotonElectronGap gap = photon_electron_gap(m, config.N, m.C_sd0, config.distance());
    out.summary.emplace_back("photon_electron_gap", num(gap.gap));
    out.summary.emplace_back("equal_width_assumed", gap.equal_width_assumed ? "true" : "false");
  } catch (const DomainError& e) {
    out.summary.emplace_back("first_click", std::string("not defined: ") + e.what());
  }
  const auto crossover = frozen_crossover(m, m.C_sd0, config.distance());
  out.summary.emplace_back("frozen_crossover_N", crossover ? num(*crossover) : "none");
  write_summary(path_in(config, "frozen_summary.txt"), h, out.summary);
  emit(out, path_in(config, "frozen_summary.txt"));
  return out;
}

RunOutput run_firstclick(const RunConfig& config) {
  validate(config);
  RunOutput out;
  emit(out, write_manifest(config));
  const PacketSpec packet = config.packet_spec();
  const BarrierSpec barrier = config.barrier_spec();
  const std::vector<double> times = config.time_grid();

  const FluxResult exact = compute_exact(config);
  out.warnings = exact.warnings;
  std::vector<double> P_sd(times.size(), kNaN);
  std::optional<SdaResult> sda;
  try {
    sda = sda_distribution(times, packet, barrier);
    P_sd = aligned(times, sda->distribution.times, sda->distribution.density);
    out.warnings.insert(out.warnings.end(), sda->trace.warnings.begin(), sda->trace.warnings.end());
  } catch (const Error& e) {
    if (config.firstclick.source == "sda") throw Error(std::string("sda: ") + e.what());
    out.warnings.push_back(std::string("sda curve omitted: ") + e.what());
  }
  const TimeDistribution photon = photon_distribution(packet, config.distance(), times);

  TimeDistribution source;
  const std::string& which = config.firstclick.source;
  if (which == "exact") source = exact.distribution;
  else if (which == "sda") source = sda->distribution;
  else if (which == "photon") source = photon;
  else source = staged("frozen", [&] { return frozen_model(packet, barrier).distribution(times); });

  const FirstClickSpec spec = staged("firstclick", [&] { return make_first_click_spec(config.N, source); });
  const FirstClickResult fc = first_click_density(spec, FirstClickForm::Exact);
  const FirstClickSpec photon_spec = make_first_click_spec(config.N, photon);
  const FirstClickResult fc_photon = first_click_density(photon_spec, FirstClickForm::Exact);

  const double floor = exact.distribution.floor;
  Header h = base_header(config, floor);
  h.set("distance", config.distance());
  h.set("floor_rule", "median |density| for t < 0.5 distance");
  h.set("density_column", "P");
  h.set("N", config.N);
  h.set("source", which);

  const std::vector<double> P_1st = aligned(times, fc.times, fc.density);
  if (config.wants("csv")) {
    Table t;
    t.header = h;
    t.columns = {"time", "P", "P_sd", "P_gamma", "P_1st", "P_1st_gamma"};
    t.data = {times, exact.distribution.density, P_sd, photon.density, P_1st, fc_photon.density};
    write_table(path_in(config, "fig1.csv"), t);
    emit(out, path_in(config, "fig1.csv"));
  }
  if (config.wants("svg")) {
    Plot p;
    p.title = "Transmission and first-click time distributions, N = " + num(config.N);
    p.x_label = "t (lambda-bar/c)";
    p.y_label = "density (c/lambda-bar)";
    p.log_y = true;
    p.floor = floor;
    p.series.push_back({"P", times, exact.distribution.density, "#1f77b4", 1.8, false});
    p.series.push_back({"P_sd", times, P_sd, "#d62728", 1.2, true});
    p.series.push_back({"P_gamma", times, photon.density, "#2ca02c", 1.2, true});
    // N amplifies noise in the source below its floor; leave it undrawn.
    std::vector<double> shown = P_1st;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double src = source.density_at(times[i]);
      if (!(std::abs(src) > source.floor)) shown[i] = kNaN;
    }
    p.series.push_back({"P_1st (" + which + ")", times, shown, "#ff7f0e", 1.8, false});
    p.series.push_back({"P_1st,gamma", times, fc_photon.density, "#17becf", 1.8, false});
    write_svg_plot(path_in(config, "fig1.svg"), p, h);
    emit(out, path_in(config, "fig1.svg"));
  }

  out.summary = {{"source", which},
                 {"N", num(config.N)},
                 {"C_trans", num(spec.c_trans())},
                 {"a", num(spec.a())},
                 {"total", num(fc.total)},
                 {"total_closed", num(fc.total_closed)},
                 {"t_peak", num(fc.t_peak)},
                 {"t_peak_photon", num(fc_photon.t_peak)},
                 {"floor", num(floor)}};
  if (fc.t_1st) {
    out.summary.emplace_back("t_1st", num(*fc.t_1st));
    out.summary.emplace_back("delta_t_1st", num(fc.delta_t_1st));
    out.summary.emplace_back("silence_after",
                             num(*fc.t_1st + config.firstclick.silence_fraction * fc.delta_t_1st));
  } else {
    out.summary.emplace_back("t_1st", "not reached within the time range");
  }
  if (fc_photon.t_1st) out.summary.emplace_back("t_1st_photon", num(*fc_photon.t_1st));

  if (config.firstclick.mc_trials > 0) {
    const McResult mc = staged("montecarlo", [&] {
      return monte_carlo_first_click(spec, config.firstclick.mc_trials, config.seed);
    });
    const double N = config.N;
    auto cdf = [&](double t) { return -std::expm1(N * std::log1p(-std::clamp(source.cumulative_at(t), 0.0, 1.0))); };
    const double p_none = std::exp(N * std::log1p(-spec.c_trans()));
    const double centre = fc.t_1st ? *fc.t_1st : fc.t_peak;
    const double width = std::isfinite(fc.delta_t_1st) && fc.delta_t_1st > 0.0 ? fc.delta_t_1st : config.times.step;
    const double lo = std::max(times.front(), centre - 12.0 * width);
    const double hi = std::min(times.back(), centre + 12.0 * width);
    const int bins = 60;
    std::vector<double> mid(bins), edge_lo(bins), edge_hi(bins), count(bins, 0.0), expected(bins);
    for (int k = 0; k < bins; ++k) {
      edge_lo[k] = lo + (hi - lo) * k / bins;
      edge_hi[k] = lo + (hi - lo) * (k + 1) / bins;
      mid[k] = 0.5 * (edge_lo[k] + edge_hi[k]);
      expected[k] = static_cast<double>(mc.n_trials) * (cdf(edge_hi[k]) - cdf(edge_lo[k]));
    }
    for (double t : mc.click_times) {
      const int k = static_cast<int>(std::floor((t - lo) / (hi - lo) * bins));
      if (k >= 0 && k < bins) count[k] += 1.0;
    }
    Header hh = h;
    hh.set("seed", std::to_string(config.seed));
    hh.set("trials", std::to_string(mc.n_trials));
    hh.set("no_click", std::to_string(mc.no_click));
    hh.entries.erase(std::remove_if(hh.entries.begin(), hh.entries.end(),
                                    [](const auto& e) { return e.first == "density_column"; }),
                     hh.entries.end());
    Table t;
    t.header = hh;
    t.columns = {"time", "bin_lo", "bin_hi", "count", "expected"};
    t.data = {mid, edge_lo, edge_hi, count, expected};
    write_table(path_in(config, "mc_histogram.csv"), t);
    emit(out, path_in(config, "mc_histogram.csv"));
    const ChiSquare chi = chi_square_first_click(mc, cdf, p_none, times.front(), times.back(), 20);
    out.summary.emplace_back("mc_trials", std::to_string(mc.n_trials));
    out.summary.emplace_back("mc_no_click_fraction", num(mc.no_click_fraction()));
    out.summary.emplace_back("no_click_probability", num(p_none));
    out.summary.emplace_back("chi_square", num(chi.statistic));
    out.summary.emplace_back("chi_square_dof", std::to_string(chi.dof));
    out.summary.emplace_back("chi_square_p", num(chi.p_value));
  }
  for (const auto& w : out.warnings) out.summary.emplace_back("warning", w);
  write_summary(path_in(config, "firstclick_summary.txt"), h, out.summary);
  emit(out, path_in(config, "firstclick_summary.txt"));
  return out;
}

RunOutput run_taumap(const RunConfig& config) {
  validate(config);
  RunOutput out;
  emit(out, write_manifest(config));
  const PacketSpec packet = config.packet_spec();
  const BarrierSpec barrier = config.barrier_spec();
  const auto& tm = config.taumap;
  const TauMap map = staged("taumap", [&] {
    return tau_contour_map(tm.re_lo, tm.re_hi, tm.im_lo, tm.im_hi, tm.nx, tm.ny, packet, barrier,
                           config.times.start, config.times.stop, tm.path_spacing);
  });
  Header h = base_header(config, 0.0);
  const double highlight = config.distance();
  h.set("highlight_level", highlight);
  if (config.wants("csv")) {
    Table t;
    t.header = h;
    t.columns = {"re_p", "im_p", "re_tau"};
    t.data.assign(3, {});
    for (std::size_t iy = 0; iy < map.ny; ++iy)
      for (std::size_t ix = 0; ix < map.nx; ++ix) {
        t.data[0].push_back(map.x(ix));
        t.data[1].push_back(map.y(iy));
        t.data[2].push_back(map.at(ix, iy));
      }
    write_table(path_in(config, "taumap.csv"), t);
    emit(out, path_in(config, "taumap.csv"));
    Table p;
    p.header = h;
    p.columns = {"time", "re_p", "im_p"};
    p.data.assign(3, {});
    for (std::size_t i = 0; i < map.path.size(); ++i) {
      p.data[0].push_back(map.path_times[i]);
      p.data[1].push_back(map.path[i].real());
      p.data[2].push_back(map.path[i].imag());
    }
    write_table(path_in(config, "taumap_path.csv"), p);
    emit(out, path_in(config, "taumap_path.csv"));
  }
  if (config.wants("svg")) {
    std::vector<double> levels;
    for (int k = -15; k <= 15; ++k) levels.push_back(highlight + 2.0 * k);
    write_svg_contours(path_in(config, "taumap.svg"), map, levels, highlight, h);
    emit(out, path_in(config, "taumap.svg"));
  }
  out.summary = {{"path_points", std::to_string(map.path.size())},
                 {"highlight_level", num(highlight)}};
  return out;
}

}  // namespace dtt
