#pragma once

#include <string>
#include <vector>

#include "dtt/barrier.hpp"
#include "dtt/grid.hpp"
#include "dtt/kinematics.hpp"
#include "dtt/time_distribution.hpp"

namespace dtt {

enum class Precision { Standard, Extended };

const char* to_string(Precision p);
Precision precision_from_string(const std::string& s);

/// The transmitted packet reduced to one amplitude per grid node:
///   psi(z, t) = sum_i a_i (1, u1_i) exp(i (p_i (z - z0 - l) - E_i t)),
///   a_i = K w_i exp(-(p_i - p0)^2 / 2 Gamma) / D(p_i),
/// with T = exp(-i p l) / D. Summation runs over nodes in ascending order,
/// so every evaluation is bit-reproducible.
///
/// Extended precision forms the phase in double-double arithmetic, reduces
/// it modulo 2 pi before rounding, and accumulates in double-double.
/// Standard precision does the same in plain double with Neumaier sums.
class TransmittedPacket {
 public:
  TransmittedPacket(const MomentumGrid& grid, const PacketSpec& packet, const BarrierSpec& barrier,
                    double amplitude_scale = 1.0);

  Spinor at(double z, double t, Precision precision) const;
  /// Detector flux 2 Re(conj(psi_0) psi_1) at z2.
  double flux(double t, Precision precision) const;
  /// Transmitted mass computed in momentum space,
  ///   2 pi K^2 int w(p) exp(-(p - p0)^2 / Gamma) |T|^2 (1 + u1^2) dp.
  double momentum_space_mass() const;

  const BarrierSpec& barrier() const { return barrier_; }
  const PacketSpec& packet() const { return packet_; }
  std::size_t size() const { return p_.size(); }

 private:
  PacketSpec packet_;
  BarrierSpec barrier_;
  std::vector<double> p_;
  std::vector<double> e_hi_, e_lo_;  // E(p) as a double-double
  std::vector<double> a_re_, a_im_;  // upper-component amplitudes
  std::vector<double> b_re_, b_im_;  // lower-component amplitudes (u1 a)
  double mass_ = 0.0;
};

/// psi(z, t) in the transmitted region (z >= z2).
Spinor transmitted_wavefunction(double z, double t, const MomentumGrid& grid, const PacketSpec& packet,
                                const BarrierSpec& barrier, Precision precision = Precision::Extended);

/// Flux at each requested time; serial reference and OpenMP kernels give
/// bit-identical results.
std::vector<double> flux_samples_serial(const TransmittedPacket& kernel, const std::vector<double>& times,
                                        Precision precision);
std::vector<double> flux_samples_parallel(const TransmittedPacket& kernel, const std::vector<double>& times,
                                          Precision precision);

struct FluxOptions {
  Precision precision = Precision::Extended;
  bool parallel = true;
  double truncation_tolerance = 1e-6;
};

struct FluxResult {
  TimeDistribution distribution;
  double momentum_mass = 0.0;    ///< C_trans from the momentum-space integral
  double truncated_mass = 0.0;   ///< relative mass missing from the time range
  Precision precision = Precision::Extended;
  std::vector<std::string> warnings;
};

/// Median |P| over the samples with t < 0.5 distance, where no transmitted
/// signal can be present. Zero when there are no such samples.
double estimate_floor(const std::vector<double>& times, const std::vector<double>& density, double distance);

/// Transmission-time distribution at the detector z2.
FluxResult flux_distribution(const MomentumGrid& grid, const PacketSpec& packet, const BarrierSpec& barrier,
                             const std::vector<double>& times, const FluxOptions& options = {});

/// Arrival density of a photon carrying the packet's initial envelope across
/// `distance`: sqrt(Gamma / pi) exp(-Gamma (distance - t)^2), with the
/// closed-form cumulative erfc(sqrt(Gamma) (distance - t)) / 2 and unit mass.
TimeDistribution photon_distribution(const PacketSpec& packet, double distance, const std::vector<double>& times);

/// Evenly spaced times t0, t0 + dt, ..., up to and including t1.
std::vector<double> time_range(double t0, double t1, double dt);

}  // namespace dtt
