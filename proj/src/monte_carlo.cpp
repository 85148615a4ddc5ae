#include "dtt/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "dtt/error.hpp"

namespace dtt {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

PhiloxStream::result_type PhiloxStream::operator()() {
  if (used_ == 4) {
    buf_ = Philox4x32::block(ctr_, key_);
    if (++ctr_[0] == 0) ++ctr_[1];
    used_ = 0;
  }
  return buf_[used_++];
}

double PhiloxStream::uniform() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

double PhiloxStream::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

InverseCdf::InverseCdf(const TimeDistribution& source) : d_(source) {
  if (!(source.total > 0.0)) throw SamplingError("source distribution has no mass to sample");
  const double tol = 1e-14 * source.total;
  for (std::size_t i = 1; i < source.size(); ++i)
    if (source.cumulative[i] < source.cumulative[i - 1] - tol)
      throw SamplingError("cumulative decreases at t = " + std::to_string(source.times[i]) +
                          "; the distribution is corrupted");
}

double InverseCdf::operator()(double u) const {
  const double level = u * d_.total;
  const auto& C = d_.cumulative;
  auto it = std::lower_bound(C.begin(), C.end(), level);
  if (it == C.begin()) return d_.times.front();
  if (it == C.end()) return d_.times.back();
  const std::size_t i = static_cast<std::size_t>(it - C.begin()) - 1;
  const double h = d_.times[i + 1] - d_.times[i];
  const double P0 = std::max(d_.density[i], 0.0);
  const double P1 = std::max(d_.density[i + 1], 0.0);
  const double a = (P1 - P0) / (2.0 * h);
  const double c = C[i] - level;
  double s;
  if (std::abs(a) * h <= 1e-12 * P0 || a == 0.0) {
    s = P0 > 0.0 ? -c / P0 : 0.0;
  } else {
    const double disc = std::max(0.0, P0 * P0 - 4.0 * a * c);
    // Root of a s^2 + P0 s + c = 0 in [0, h], in the cancellation-free form.
    s = -2.0 * c / (P0 + std::sqrt(disc));
  }
  return d_.times[i] + std::clamp(s, 0.0, h);
}

McResult monte_carlo_first_click(const FirstClickSpec& spec, std::size_t n_trials, std::uint64_t seed,
                                 bool parallel) {
  if (n_trials == 0) throw ConfigError("n_trials", "need at least one trial");
  const InverseCdf inverse(spec.source);
  const double C = spec.c_trans();
  const double N = spec.N;
  const bool literal = N <= kLiteralTrialLimit;
  const auto n_literal = static_cast<long long>(std::llround(N));
  std::vector<double> first(n_trials);
  const auto trials = static_cast<std::ptrdiff_t>(n_trials);

  auto run_trial = [&](std::ptrdiff_t i) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(i));
    double best = std::numeric_limits<double>::infinity();
    if (literal) {
      for (long long k = 0; k < n_literal; ++k)
        if (rng.uniform() < C) best = std::min(best, inverse(rng.uniform()));
    } else {
      std::binomial_distribution<long long> count(static_cast<long long>(N), C);
      const long long K = count(rng);
      if (K > 0) best = inverse(-std::expm1(std::log(rng.uniform_open()) / static_cast<double>(K)));
    }
    first[static_cast<std::size_t>(i)] = best;
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < trials; ++i) run_trial(i);
  } else {
    for (std::ptrdiff_t i = 0; i < trials; ++i) run_trial(i);
  }

  McResult r;
  r.n_trials = n_trials;
  r.click_times.reserve(n_trials);
  for (double t : first) {
    if (std::isinf(t)) ++r.no_click;
    else r.click_times.push_back(t);
  }
  return r;
}

ChiSquare chi_square_first_click(const McResult& mc, const std::function<double(double)>& cdf, double p_no_click,
                                 double t_lo, double t_hi, int bins) {
  if (bins < 2) throw ConfigError("bins", "need at least two bins");
  const double p_click = 1.0 - p_no_click;
  // Bin edges at equal model probability, found by bisection on the CDF.
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  edges.front() = -std::numeric_limits<double>::infinity();
  edges.back() = std::numeric_limits<double>::infinity();
  for (int k = 1; k < bins; ++k) {
    const double target = p_click * k / bins;
    double lo = t_lo, hi = t_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < target ? lo : hi) = mid;
    }
    edges[static_cast<std::size_t>(k)] = 0.5 * (lo + hi);
  }
  std::vector<double> sorted = mc.click_times;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(mc.n_trials);
  ChiSquare out;
  out.bins = bins + (p_no_click > 0.0 ? 1 : 0);
  for (int k = 0; k < bins; ++k) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), edges[static_cast<std::size_t>(k)]);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), edges[static_cast<std::size_t>(k) + 1]);
    const double observed = static_cast<double>(hi - lo);
    const double pk = (k == bins - 1 ? p_click : cdf(edges[static_cast<std::size_t>(k) + 1])) -
                      (k == 0 ? 0.0 : cdf(edges[static_cast<std::size_t>(k)]));
    const double expected = n * pk;
    out.statistic += (observed - expected) * (observed - expected) / expected;
  }
  if (p_no_click > 0.0) {
    const double expected = n * p_no_click;
    const double observed = static_cast<double>(mc.no_click);
    out.statistic += (observed - expected) * (observed - expected) / expected;
  }
  out.dof = out.bins - 1;
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace dtt
