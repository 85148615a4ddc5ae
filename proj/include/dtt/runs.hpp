#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dtt/config.hpp"
#include "dtt/output.hpp"

namespace dtt {

struct RunOutput {
  std::vector<std::string> files;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> warnings;
};

/// Header shared by every artifact of a run.
Header base_header(const RunConfig& config, double floor);

/// Writes `config.txt` (the canonical serialisation) into the output
/// directory; `verify` checks every other artifact against it.
std::string write_manifest(const RunConfig& config);

/// exact.csv (time, density, cumulative, tail), exact.svg, exact_summary.txt.
RunOutput run_exact(const RunConfig& config);

/// sda.csv with the saddle path, sda.svg, and the tau# trace
/// (tau_trace.csv, tau_trace.svg with the most probable time marked).
RunOutput run_sda(const RunConfig& config);

/// frozen.csv, frozen.svg and a summary of the model parameters, first-click
/// timing and the frozen crossover.
RunOutput run_frozen(const RunConfig& config);

/// fig1.csv and fig1.svg with P, P_sd, P_gamma, P_1st (from the configured
/// source) and P_1st,gamma, a first-click summary and, when
/// firstclick.mc_trials > 0, a Monte Carlo histogram with its chi-square.
RunOutput run_firstclick(const RunConfig& config);

/// taumap.csv (Re tau over the complex p plane), taumap_path.csv and
/// taumap.svg with the saddle path dotted every taumap.path_spacing.
RunOutput run_taumap(const RunConfig& config);

}  // namespace dtt
