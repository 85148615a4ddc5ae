#include "dtt/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dtt/double_double.hpp"
#include "dtt/error.hpp"

namespace dtt {

const char* to_string(Precision p) { return p == Precision::Extended ? "ext" : "std"; }

Precision precision_from_string(const std::string& s) {
  if (s == "ext" || s == "extended") return Precision::Extended;
  if (s == "std" || s == "standard") return Precision::Standard;
  throw ConfigError("precision", "expected 'std' or 'ext', got '" + s + "'");
}

TransmittedPacket::TransmittedPacket(const MomentumGrid& grid, const PacketSpec& packet,
                                     const BarrierSpec& barrier, double amplitude_scale)
    : packet_(packet), barrier_(barrier) {
  const std::size_t n = grid.size();
  p_ = grid.nodes;
  e_hi_.resize(n);
  e_lo_.resize(n);
  a_re_.resize(n);
  a_im_.resize(n);
  b_re_.resize(n);
  b_im_.resize(n);
  CompensatedSum mass;
  const double K = packet.K * amplitude_scale;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = p_[i];
    const DoubleDouble E = sqrt(dd::two_prod(p, p) + 1.0);
    e_hi_[i] = E.hi;
    e_lo_[i] = E.lo;
    const double env = packet_envelope(packet, p);
    const cplx D = transmission_denominator(cplx{p}, barrier);
    const cplx a = (K * grid.weights[i] * env) / D;
    const double u1 = p / (E.hi + 1.0);
    a_re_[i] = a.real();
    a_im_[i] = a.imag();
    b_re_[i] = u1 * a.real();
    b_im_[i] = u1 * a.imag();
    mass.add(2.0 * std::numbers::pi * K * K * grid.weights[i] * env * env * (1.0 + u1 * u1) / std::norm(D));
  }
  mass_ = mass.value();
}

namespace {

struct Sums {
  double r0, i0, r1, i1;
};

Sums accumulate_extended(const std::vector<double>& p, const std::vector<double>& ehi,
                         const std::vector<double>& elo, const std::vector<double>& are,
                         const std::vector<double>& aim, const std::vector<double>& bre,
                         const std::vector<double>& bim, double X, double t) {
  DoubleDouble r0, i0, r1, i1;
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k) {
    const DoubleDouble px = dd::two_prod(p[k], X);
    const DoubleDouble et = DoubleDouble{ehi[k], elo[k]} * t;
    const double theta = dd::reduce_angle(px - et);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    r0 += dd::two_prod(are[k], c) - dd::two_prod(aim[k], s);
    i0 += dd::two_prod(are[k], s) + dd::two_prod(aim[k], c);
    r1 += dd::two_prod(bre[k], c) - dd::two_prod(bim[k], s);
    i1 += dd::two_prod(bre[k], s) + dd::two_prod(bim[k], c);
  }
  return {r0.to_double(), i0.to_double(), r1.to_double(), i1.to_double()};
}

Sums accumulate_standard(const std::vector<double>& p, const std::vector<double>& ehi,
                         const std::vector<double>& are, const std::vector<double>& aim,
                         const std::vector<double>& bre, const std::vector<double>& bim, double X, double t) {
  CompensatedSum r0, i0, r1, i1;
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = std::remainder(p[k] * X - ehi[k] * t, 2.0 * std::numbers::pi);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    r0.add(are[k] * c - aim[k] * s);
    i0.add(are[k] * s + aim[k] * c);
    r1.add(bre[k] * c - bim[k] * s);
    i1.add(bre[k] * s + bim[k] * c);
  }
  return {r0.value(), i0.value(), r1.value(), i1.value()};
}

}  // namespace

Spinor TransmittedPacket::at(double z, double t, Precision precision) const {
  const double X = z - packet_.z0 - barrier_.width();
  const Sums s = precision == Precision::Extended
                     ? accumulate_extended(p_, e_hi_, e_lo_, a_re_, a_im_, b_re_, b_im_, X, t)
                     : accumulate_standard(p_, e_hi_, a_re_, a_im_, b_re_, b_im_, X, t);
  return {cplx{s.r0, s.i0}, cplx{s.r1, s.i1}};
}

double TransmittedPacket::flux(double t, Precision precision) const {
  const Spinor psi = at(barrier_.z2, t, precision);
  return 2.0 * (psi.upper.real() * psi.lower.real() + psi.upper.imag() * psi.lower.imag());
}

double TransmittedPacket::momentum_space_mass() const { return mass_; }

Spinor transmitted_wavefunction(double z, double t, const MomentumGrid& grid, const PacketSpec& packet,
                                const BarrierSpec& barrier, Precision precision) {
  return TransmittedPacket(grid, packet, barrier).at(z, t, precision);
}

std::vector<double> flux_samples_serial(const TransmittedPacket& kernel, const std::vector<double>& times,
                                        Precision precision) {
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = kernel.flux(times[i], precision);
  return out;
}

std::vector<double> flux_samples_parallel(const TransmittedPacket& kernel, const std::vector<double>& times,
                                          Precision precision) {
  std::vector<double> out(times.size());
  const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = kernel.flux(times[i], precision);
  return out;
}

double estimate_floor(const std::vector<double>& times, const std::vector<double>& density, double distance) {
  std::vector<double> quiet;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.5 * distance) quiet.push_back(std::abs(density[i]));
  if (quiet.empty()) return 0.0;
  auto mid = quiet.begin() + static_cast<std::ptrdiff_t>(quiet.size() / 2);
  std::nth_element(quiet.begin(), mid, quiet.end());
  return *mid;
}

FluxResult flux_distribution(const MomentumGrid& grid, const PacketSpec& packet, const BarrierSpec& barrier,
                             const std::vector<double>& times, const FluxOptions& options) {
  const TransmittedPacket kernel(grid, packet, barrier);
  std::vector<double> density = options.parallel ? flux_samples_parallel(kernel, times, options.precision)
                                                 : flux_samples_serial(kernel, times, options.precision);
  const double distance = barrier.z2 - packet.z0;
  const double floor = estimate_floor(times, density, distance);

  FluxResult r;
  r.precision = options.precision;
  r.momentum_mass = kernel.momentum_space_mass();
  r.distribution = TimeDistribution::from_density(times, std::move(density), floor, "exact");
  r.truncated_mass = (r.momentum_mass - r.distribution.total) / r.momentum_mass;
  if (std::abs(r.truncated_mass) > options.truncation_tolerance)
    r.warnings.push_back("time range misses a relative mass of " + std::to_string(r.truncated_mass) +
                         " (momentum-space C_trans " + std::to_string(r.momentum_mass) + ")");
  if (floor == 0.0) r.warnings.push_back("no samples before half the photon time; floor not estimated");
  return r;
}

TimeDistribution photon_distribution(const PacketSpec& packet, double distance, const std::vector<double>& times) {
  if (!(distance > 0.0)) throw ConfigError("distance", "photon travel distance must be positive");
  std::vector<double> density(times.size()), cumulative(times.size());
  const double norm = std::sqrt(packet.gamma / std::numbers::pi);
  const double sg = packet.sqrt_gamma();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = distance - times[i];
    density[i] = norm * std::exp(-packet.gamma * x * x);
    cumulative[i] = 0.5 * std::erfc(sg * x);
  }
  return TimeDistribution::from_density_and_cumulative(times, std::move(density), std::move(cumulative), 1.0, 0.0,
                                                       "photon");
}

std::vector<double> time_range(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !(t1 > t0)) throw ConfigError("times", "need t1 > t0 and dt > 0");
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t0 + dt * static_cast<double>(i);
  return t;
}

}  // namespace dtt
