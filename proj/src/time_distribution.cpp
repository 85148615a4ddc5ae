#include "dtt/time_distribution.hpp"

#include <algorithm>
#include <cmath>

#include "dtt/double_double.hpp"
#include "dtt/error.hpp"

namespace dtt {

TimeDistribution TimeDistribution::from_density(std::vector<double> times, std::vector<double> density,
                                                double floor, std::string label) {
  if (times.size() != density.size() || times.size() < 2)
    throw Error("time distribution needs at least two samples of matching length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error("time samples must be strictly increasing");

  TimeDistribution d;
  d.times = std::move(times);
  d.density = std::move(density);
  d.floor = floor;
  d.label = std::move(label);
  d.cumulative.resize(d.times.size());
  d.tail.resize(d.times.size());
  CompensatedSum acc;
  d.cumulative[0] = 0.0;
  for (std::size_t i = 1; i < d.times.size(); ++i) {
    acc.add(0.5 * (d.times[i] - d.times[i - 1]) * (d.density[i] + d.density[i - 1]));
    d.cumulative[i] = acc.value();
  }
  for (std::size_t i = 0; i < d.times.size(); ++i) d.tail[i] = 1.0 - d.cumulative[i];
  d.total = d.cumulative.back();
  return d;
}

TimeDistribution TimeDistribution::from_density_and_cumulative(std::vector<double> times,
                                                               std::vector<double> density,
                                                               std::vector<double> cumulative, double total,
                                                               double floor, std::string label) {
  if (cumulative.size() != times.size()) throw Error("cumulative length does not match the time samples");
  TimeDistribution d = from_density(std::move(times), std::move(density), floor, std::move(label));
  d.cumulative = std::move(cumulative);
  d.total = total;
  for (std::size_t i = 0; i < d.times.size(); ++i) d.tail[i] = 1.0 - d.cumulative[i];
  return d;
}

namespace {
std::size_t interval_of(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  const auto i = static_cast<std::size_t>(it - times.begin()) - 1;
  return std::min(i, times.size() - 2);
}
}  // namespace

double TimeDistribution::density_at(double t) const {
  if (t <= times.front()) return density.front();
  if (t >= times.back()) return density.back();
  const std::size_t i = interval_of(times, t);
  const double s = (t - times[i]) / (times[i + 1] - times[i]);
  return density[i] + s * (density[i + 1] - density[i]);
}

double TimeDistribution::cumulative_at(double t) const {
  if (t <= times.front()) return 0.0;
  if (t >= times.back()) return total;
  const std::size_t i = interval_of(times, t);
  const double h = times[i + 1] - times[i];
  const double s = t - times[i];
  return cumulative[i] + density[i] * s + (density[i + 1] - density[i]) * s * s / (2.0 * h);
}

std::optional<double> TimeDistribution::time_at_cumulative(double level) const {
  auto it = std::find_if(cumulative.begin(), cumulative.end(), [&](double c) { return c >= level; });
  if (it == cumulative.end()) return std::nullopt;
  const auto j = static_cast<std::size_t>(it - cumulative.begin());
  if (j == 0) return times.front();
  const std::size_t i = j - 1;
  const double h = times[i + 1] - times[i];
  const double a = (density[i + 1] - density[i]) / (2.0 * h);
  const double b = density[i];
  const double c = cumulative[i] - level;
  // Solve a s^2 + b s + c = 0 for the root in [0, h], stably.
  double s;
  if (std::abs(a) * h < 1e-12 * std::abs(b) || a == 0.0) {
    s = b != 0.0 ? -c / b : 0.0;
  } else {
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q / a;
    const double r2 = q != 0.0 ? c / q : r1;
    s = (r1 >= 0.0 && r1 <= h) ? r1 : r2;
  }
  return times[i] + std::clamp(s, 0.0, h);
}

double TimeDistribution::peak_time() const {
  const auto it = std::max_element(density.begin(), density.end());
  return times[static_cast<std::size_t>(it - density.begin())];
}

}  // namespace dtt
