#include "dtt/first_click.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "dtt/double_double.hpp"
#include "dtt/error.hpp"

namespace dtt {

namespace {

const double kTwoSqrtPi = 2.0 * std::sqrt(std::numbers::pi);
const double kSqrtE = std::exp(0.5);

double log_survival(double N, double C, FirstClickForm form) {
  return form == FirstClickForm::Exact ? (N - 1.0) * std::log1p(-C) : -N * C;
}

}  // namespace

FirstClickSpec make_first_click_spec(double N, TimeDistribution source) {
  if (!(N >= 1.0)) throw ConfigError("N", "particle count must be >= 1");
  if (!(source.total > 0.0)) throw ConfigError("source", "source distribution carries no transmitted mass");
  if (!(source.total <= 1.0)) throw ConfigError("source", "transmitted mass exceeds 1");
  return {N, std::move(source)};
}

FirstClickResult first_click_density(const FirstClickSpec& spec, FirstClickForm form) {
  const TimeDistribution& s = spec.source;
  FirstClickResult r;
  r.form = form;
  r.times = s.times;
  r.density.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double C = std::clamp(s.cumulative[i], 0.0, 1.0);
    r.density[i] = spec.N * s.density[i] * std::exp(log_survival(spec.N, C, form));
  }
  CompensatedSum acc;
  for (std::size_t i = 1; i < s.size(); ++i)
    acc.add(0.5 * (r.times[i] - r.times[i - 1]) * (r.density[i] + r.density[i - 1]));
  r.total = acc.value();
  r.total_closed = total_click_probability(spec.N, spec.c_trans(), form);
  r.t_peak = r.times[static_cast<std::size_t>(std::max_element(r.density.begin(), r.density.end()) -
                                              r.density.begin())];
  r.t_1st = s.time_at_cumulative(1.0 / spec.N);
  r.delta_t_1st = r.t_1st ? 1.0 / (spec.N * kSqrtE * s.density_at(*r.t_1st))
                          : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::vector<double> first_click_density_direct(const FirstClickSpec& spec) {
  const TimeDistribution& s = spec.source;
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = spec.N * s.density[i] * std::pow(1.0 - s.cumulative[i], spec.N - 1.0);
  return out;
}

double total_click_probability(double N, double c_trans, FirstClickForm form) {
  if (form == FirstClickForm::Exact) return -std::expm1(N * std::log1p(-c_trans));
  return -std::expm1(-N * c_trans);
}

double click_shape(double x) { return x * std::exp(-x); }
double click_shape_argmax() { return 1.0; }
double click_shape_log_curvature(double x) { return 1.0 / (x * x); }
double click_shape_log_curvature_width(double x) { return std::sqrt(click_shape_log_curvature(x)); }
double click_shape_curvature_width(double x) { return 1.0 / std::sqrt((2.0 - x) * std::exp(-x)); }

double solve_click_advance(double a, int* iterations) {
  if (!(a > kMinClickProduct))
    throw DomainError("a = N C_trans = " + std::to_string(a) + " is not above " + std::to_string(kMinClickProduct));
  const double b = std::log(a / kTwoSqrtPi);
  // h(x) = x^2 + ln x - b is increasing with h(0+) = -inf, so the root is
  // bracketed by [lo, hi] below.
  double lo = std::min(1.0, std::exp(b - 1.0));
  double hi = std::max(1.0, std::sqrt(std::abs(b)) + 1.0);
  double x = b > 0.0 ? std::sqrt(b) : std::exp(b);
  x = std::clamp(x, lo, hi);
  int it = 0;
  for (; it < 100; ++it) {
    const double h = x * x + std::log(x) - b;
    if (h > 0.0) hi = x; else lo = x;
    double xn = x - h / (2.0 * x + 1.0 / x);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    const bool done = std::abs(xn - x) <= 1e-12 * std::max(1.0, x);
    x = xn;
    if (done) break;
  }
  if (iterations) *iterations = it + 1;
  return x;
}

FirstClickTiming mean_first_click_time(double t_mp, double delta_t, double c_trans, double N) {
  FirstClickTiming r;
  r.a = N * c_trans;
  r.x = solve_click_advance(r.a, &r.iterations);
  const double b = std::log(r.a / kTwoSqrtPi);
  r.x_leading = b > 0.0 ? std::sqrt(b) : std::numeric_limits<double>::quiet_NaN();
  // (C/2) erfc(x) = 1/N  <=>  erfc(x) = 2/a.
  const double target = 2.0 / r.a;
  if (target < 2.0) {
    auto g = [&](double x) { return std::erfc(x) - target; };
    double lo = -30.0, hi = 30.0;
    std::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                        iters);
    r.x_implicit = 0.5 * (root.first + root.second);
  } else {
    r.x_implicit = std::numeric_limits<double>::quiet_NaN();
  }
  r.t_1st = t_mp - r.x * delta_t;
  r.t_1st_leading = t_mp - r.x_leading * delta_t;
  r.t_1st_implicit = t_mp - r.x_implicit * delta_t;
  return r;
}

FirstClickTiming mean_first_click_time(const FrozenModel& model, double N) {
  return mean_first_click_time(model.t_mp, model.delta_t, model.C_sd0, N);
}

FirstClickWidth first_click_width(double delta_t, double c_trans, double N) {
  const FirstClickTiming timing = mean_first_click_time(0.0, delta_t, c_trans, N);
  FirstClickWidth w;
  const double b = std::log(timing.a / kTwoSqrtPi);
  w.closed = b > 0.0 ? delta_t / (2.0 * kSqrtE * std::sqrt(b)) : std::numeric_limits<double>::quiet_NaN();
  const double x = timing.x_implicit;
  const double P = c_trans / (std::sqrt(std::numbers::pi) * delta_t) * std::exp(-x * x);
  w.general = 1.0 / (N * kSqrtE * P);
  return w;
}

FirstClickWidth first_click_width(const FrozenModel& model, double N) {
  return first_click_width(model.delta_t, model.C_sd0, N);
}

PhotonElectronGap photon_electron_gap(const FrozenModel& model, double N, double c_trans, double t_mp_photon) {
  const double le = std::log(N * c_trans / kTwoSqrtPi);
  const double lg = std::log(N / kTwoSqrtPi);
  if (!(le > 0.0) || N * c_trans <= kMinClickProduct)
    throw DomainError("N C_trans must exceed 2 sqrt(pi) for the leading-order gap");
  PhotonElectronGap g;
  g.gap = t_mp_photon - model.t_mp - model.delta_t * (std::sqrt(lg) - std::sqrt(le));
  return g;
}

std::optional<double> frozen_crossover(const FrozenModel& model, double c_trans, double t_mp_photon,
                                       double n_max) {
  const double ln_lo = std::log(kTwoSqrtPi / c_trans) + 1e-9;
  const double ln_hi = std::log(n_max);
  if (!(ln_hi > ln_lo)) return std::nullopt;
  auto gap = [&](double lnN) { return photon_electron_gap(model, std::exp(lnN), c_trans, t_mp_photon).gap; };
  const double glo = gap(ln_lo);
  const double ghi = gap(ln_hi);
  if ((glo < 0.0) == (ghi < 0.0)) return std::nullopt;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(gap, ln_lo, ln_hi, glo, ghi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return std::exp(0.5 * (r.first + r.second));
}

CrossoverScan distribution_crossover(const TimeDistribution& electron, const TimeDistribution& photon, double n_max,
                                     int points_per_decade) {
  CrossoverScan scan;
  scan.min_lead = std::numeric_limits<double>::infinity();
  const double decades = std::log10(n_max);
  const int steps = static_cast<int>(std::ceil(decades * points_per_decade));
  for (int k = 0; k <= steps; ++k) {
    const double N = std::pow(10.0, decades * k / steps);
    const auto te = electron.time_at_cumulative(1.0 / N);
    const auto tg = photon.time_at_cumulative(1.0 / N);
    if (!te || !tg) continue;
    ++scan.evaluated;
    const double lead = *te - *tg;
    if (lead < scan.min_lead) {
      scan.min_lead = lead;
      scan.n_at_min = N;
    }
    if (lead <= 0.0 && !scan.crossover_n) scan.crossover_n = N;
  }
  return scan;
}

}  // namespace dtt
