#pragma once

#include <optional>
#include <vector>

#include "dtt/frozen.hpp"
#include "dtt/time_distribution.hpp"

namespace dtt {

/// Earliest detection among N independent particles, each transmitted with
/// probability C_trans and otherwise never detected (the t -> infinity tail
/// mass 1 - C_trans).
struct FirstClickSpec {
  double N = 1.0;
  TimeDistribution source;

  double c_trans() const { return source.total; }
  double a() const { return N * source.total; }
  double tail_mass() const { return 1.0 - source.total; }
};

/// Validates N >= 1, a > 0 and 0 <= tail_mass < 1.
FirstClickSpec make_first_click_spec(double N, TimeDistribution source);

/// Exact:   P_1st = N P(t) (1 - C(t))^(N-1), evaluated as
///          N P exp((N - 1) log1p(-C)); total 1 - (1 - C_trans)^N.
/// Poisson: P_1st = N P(t) exp(-N C(t)), the large-N form; total
///          1 - exp(-N C_trans).
enum class FirstClickForm { Exact, Poisson };

struct FirstClickResult {
  FirstClickForm form = FirstClickForm::Exact;
  std::vector<double> times;
  std::vector<double> density;
  double total = 0.0;          ///< trapezoid quadrature of the density
  double total_closed = 0.0;   ///< closed form for the chosen density form
  double t_peak = 0.0;         ///< sample time of the density maximum
  std::optional<double> t_1st; ///< time at which C(t) = 1/N
  double delta_t_1st = 0.0;    ///< 1 / (N e^{1/2} P(t_1st)), NaN without t_1st
};

FirstClickResult first_click_density(const FirstClickSpec& spec, FirstClickForm form = FirstClickForm::Exact);

/// Direct power form N P (1 - C)^(N-1), for cross-checks at moderate N.
std::vector<double> first_click_density_direct(const FirstClickSpec& spec);

/// 1 - exp(-N C_trans) (Poisson) or 1 - (1 - C_trans)^N (exact).
double total_click_probability(double N, double c_trans, FirstClickForm form = FirstClickForm::Poisson);

/// f(x) = x exp(-x), the large-N first-click shape.
double click_shape(double x);
/// Location of the maximum of f (x = 1).
double click_shape_argmax();
/// -d^2/dx^2 ln f = 1 / x^2.
double click_shape_log_curvature(double x);
/// Width from the log curvature, (-d^2/dx^2 ln f)^(1/2); equals 1 at x = 1.
double click_shape_log_curvature_width(double x);
/// (-f''(x))^(-1/2); equals e^{1/2} at x = 1.
double click_shape_curvature_width(double x);

/// Smallest a for which the large-N timing formulas are accepted.
inline constexpr double kMinClickProduct = 0.519;

/// Mean first-click time under a Gaussian source of centre t_mp, width
/// delta_t (density C exp(-((t - t_mp)/delta_t)^2) / (sqrt(pi) delta_t)).
struct FirstClickTiming {
  double a = 0.0;
  double x = 0.0;             ///< root of x^2 + ln x = ln(a / 2 sqrt(pi))
  double x_leading = 0.0;     ///< sqrt(ln(a / 2 sqrt(pi))), NaN for a <= 2 sqrt(pi)
  double x_implicit = 0.0;    ///< root of (C/2) erfc(x) = 1/N
  double t_1st = 0.0;         ///< t_mp - x delta_t
  double t_1st_leading = 0.0;
  double t_1st_implicit = 0.0;
  int iterations = 0;
};

/// Solves x^2 + ln x = ln(a / 2 sqrt(pi)) to 1e-12. Throws DomainError for
/// a <= 0.519.
double solve_click_advance(double a, int* iterations = nullptr);

FirstClickTiming mean_first_click_time(double t_mp, double delta_t, double c_trans, double N);
FirstClickTiming mean_first_click_time(const FrozenModel& model, double N);

struct FirstClickWidth {
  double closed = 0.0;   ///< delta_t / (2 sqrt(e ln(a / 2 sqrt(pi))))
  double general = 0.0;  ///< 1 / (N e^{1/2} P(t_1st)) at the implicit t_1st
};

FirstClickWidth first_click_width(double delta_t, double c_trans, double N);
FirstClickWidth first_click_width(const FrozenModel& model, double N);

/// t_1st,photon - t_1st,electron with both frozen widths equal to
/// model.delta_t (the assumption is reported by `equal_width_assumed`).
struct PhotonElectronGap {
  double gap = 0.0;
  bool equal_width_assumed = true;
};

PhotonElectronGap photon_electron_gap(const FrozenModel& model, double N, double c_trans, double t_mp_photon);

/// N at which the frozen-model gap changes sign, searched by bisection on
/// ln N up to n_max. Empty when no sign change is found.
std::optional<double> frozen_crossover(const FrozenModel& model, double c_trans, double t_mp_photon,
                                       double n_max = 1e300);

/// Scans N logarithmically up to n_max and compares the times at which the
/// two cumulatives reach 1/N. Reports the first N for which the electron
/// source is not later than the photon source.
struct CrossoverScan {
  std::optional<double> crossover_n;
  double min_lead = 0.0;  ///< min over N of t_1st(electron) - t_1st(photon)
  double n_at_min = 0.0;
  std::size_t evaluated = 0;
};

CrossoverScan distribution_crossover(const TimeDistribution& electron, const TimeDistribution& photon,
                                     double n_max = 1e24, int points_per_decade = 20);

}  // namespace dtt
