#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtt/barrier.hpp"
#include "dtt/grid.hpp"
#include "dtt/kinematics.hpp"
#include "dtt/propagator.hpp"

namespace dtt {

/// Everything a run needs. Serialised as flat `key = value` lines whose keys
/// are the dotted field names below (packet.velocity, grid.n_points, ...).
struct RunConfig {
  struct Packet {
    double velocity = 0.99;  ///< fraction of c
    double width = 6.0;      ///< Delta z in lambda-bar
    double offset = 120.0;   ///< z1 - z0 in lambda-bar
  } packet;
  struct Barrier {
    double height = 6.52;  ///< V_top in m c^2
    double width = 8.0;    ///< l in lambda-bar
  } barrier;
  struct Grid {
    std::size_t n_points = 1000000;
    double refinement_ratio = 20.0;
    double q_band = 0.2;
    double half_width_sigmas = 12.0;
  } grid;
  struct Times {
    double start = 0.0;
    double stop = 600.0;
    double step = 0.5;
  } times;
  double N = 1e12;
  std::string precision = "ext";
  std::uint64_t seed = 1;
  struct Outputs {
    std::string directory = "out";
    std::string formats = "csv,svg";
  } outputs;
  struct FirstClick {
    std::string source = "exact";
    double silence_fraction = 0.25;
    std::size_t mc_trials = 0;
  } firstclick;
  struct TauMapSettings {
    double re_lo = 6.6;
    double re_hi = 7.8;
    double im_lo = -1.0;
    double im_hi = 4.0;
    std::size_t nx = 241;
    std::size_t ny = 201;
    double path_spacing = 10.0;
  } taumap;
  std::string name = "custom";

  PacketSpec packet_spec() const;
  BarrierSpec barrier_spec() const;
  GridOptions grid_options() const;
  Precision precision_mode() const;
  std::vector<double> time_grid() const;
  /// Source-detector distance z2 - z0.
  double distance() const { return packet.offset + barrier.width; }
  bool wants(const std::string& format) const;
};

/// Canonical text form; doubles are written with 17 significant digits so
/// that parsing restores them bit for bit.
std::string serialize(const RunConfig& config);

/// Parses a document produced by `serialize` (or written by hand). Keys
/// missing from the document are errors for the physical inputs
/// (packet.*, barrier.height, barrier.width) and take defaults otherwise.
/// Unknown keys and malformed values raise ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Range and consistency checks with field-level messages.
void validate(const RunConfig& config);

/// 64-bit FNV-1a of the canonical serialisation, as 16 hex digits.
std::string config_hash(const RunConfig& config);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

}  // namespace dtt
