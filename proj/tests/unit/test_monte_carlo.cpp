#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "dtt/error.hpp"
#include "dtt/monte_carlo.hpp"
#include "dtt/propagator.hpp"
#include "oracles.hpp"

using namespace dtt;

namespace {

TimeDistribution gaussian_source(const oracle::Gaussian& g, double step) {
  const auto t = time_range(g.mu - 14 * g.s, g.mu + 14 * g.s, step);
  std::vector<double> P(t.size()), C(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    P[i] = g.density(t[i]);
    C[i] = g.cumulative(t[i]);
  }
  return TimeDistribution::from_density_and_cumulative(t, P, C, g.c);
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))];
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  PhiloxStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (int i = 0; i < 16; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK((x != c() || x != d()));
  }
  PhiloxStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK((v >= 0.0 && v < 1.0));
  }
}

TEST_CASE("inverse CDF inverts the stored cumulative") {
  const oracle::Gaussian g{0.3, 50.0, 5.0};
  const TimeDistribution src = gaussian_source(g, 0.01);
  const InverseCdf inv(src);
  for (double u : {1e-6, 0.1, 0.5, 0.9, 0.999999}) CHECK(src.cumulative_at(inv(u)) == doctest::Approx(u * g.c).epsilon(1e-9));
}

TEST_CASE("inverse CDF rejects a decreasing cumulative") {
  const std::vector<double> t{0, 1, 2, 3};
  const TimeDistribution bad =
      TimeDistribution::from_density_and_cumulative(t, {0.1, 0.2, 0.1, 0.0}, {0.0, 0.2, 0.1, 0.3}, 0.3);
  CHECK_THROWS_AS(InverseCdf{bad}, SamplingError);
}

TEST_CASE("Monte Carlo is reproducible and independent of threading") {
  const TimeDistribution src = gaussian_source({0.05, 100.0, 10.0}, 0.05);
  for (double N : {200.0, 1e6}) {
    const FirstClickSpec spec = make_first_click_spec(N, src);
    const McResult a = monte_carlo_first_click(spec, 2000, 11, false);
    const McResult b = monte_carlo_first_click(spec, 2000, 11, true);
    const McResult c = monte_carlo_first_click(spec, 2000, 11, true);
    CHECK(a.click_times == b.click_times);
    CHECK(b.click_times == c.click_times);
    CHECK(a.no_click == b.no_click);
  }
}

TEST_CASE("no-click fraction matches (1 - C)^N at N C = 1") {
  const double C = 1e-3, N = 1000.0;
  const TimeDistribution src = gaussian_source({C, 100.0, 10.0}, 0.1);
  const std::size_t n = 20000;
  const McResult r = monte_carlo_first_click(make_first_click_spec(N, src), n, 5);
  const double p = std::pow(1.0 - C, N);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
  CHECK(std::abs(r.no_click_fraction() - p) < 3 * sigma);
  CHECK(std::abs(p - std::exp(-1.0)) < 2e-4);
}

TEST_CASE("single particle with unit mass reproduces the source") {
  const oracle::Gaussian g{1.0, 100.0, 10.0};
  const TimeDistribution src = gaussian_source(g, 0.05);
  const McResult r = monte_carlo_first_click(make_first_click_spec(1.0, src), 50000, 2);
  CHECK(r.no_click == 0);
  const ChiSquare chi = chi_square_first_click(
      r, [&](double t) { return g.cumulative(t); }, 0.0, g.mu - 14 * g.s, g.mu + 14 * g.s, 20);
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("first-click histogram passes chi-square at N = 200, C = 0.05") {
  const oracle::Gaussian g{0.05, 100.0, 10.0};
  const double N = 200.0;
  const TimeDistribution src = gaussian_source(g, 0.02);
  const McResult r = monte_carlo_first_click(make_first_click_spec(N, src), 100000, 3);
  auto cdf = [&](double t) { return -std::expm1(N * std::log1p(-g.cumulative(t))); };
  const ChiSquare chi = chi_square_first_click(r, cdf, std::pow(1.0 - g.c, N), g.mu - 14 * g.s, g.mu + 14 * g.s, 20);
  CHECK(chi.dof == 20);
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("large-N interquartile range follows the Gumbel law") {
  const oracle::Gaussian g{0.05, 100.0, 10.0};
  const double N = 1e6;
  const TimeDistribution src = gaussian_source(g, 0.005);
  const McResult r = monte_carlo_first_click(make_first_click_spec(N, src), 100000, 4);
  REQUIRE(r.no_click == 0);
  const double iqr = quantile(r.click_times, 0.75) - quantile(r.click_times, 0.25);
  // Quartiles of the minimum: N C(t) = -ln(3/4) and N C(t) = ln 4.
  const double lo = *src.time_at_cumulative(-std::log(0.75) / N);
  const double hi = *src.time_at_cumulative(std::log(4.0) / N);
  CHECK(iqr == doctest::Approx(hi - lo).epsilon(0.02));
  const double t1 = *src.time_at_cumulative(1.0 / N);
  const double gumbel = (std::log(std::log(4.0)) - std::log(-std::log(0.75))) / (N * g.density(t1));
  CHECK(iqr == doctest::Approx(gumbel).epsilon(0.10));
}
