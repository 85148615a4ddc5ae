// dtt: transmission-time distributions of a Dirac wavepacket tunnelling
// through a square barrier.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dtt/config.hpp"
#include "dtt/error.hpp"
#include "dtt/output.hpp"
#include "dtt/runs.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string preset;
  std::string precision;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_points;
  std::optional<double> N;
  std::string source;
  std::optional<std::size_t> mc_trials;
};

dtt::RunConfig resolve(const Overrides& o) {
  dtt::RunConfig c = o.config_path.empty() ? dtt::preset(o.preset.empty() ? "fig1-bottom" : o.preset)
                                           : dtt::load_config(o.config_path);
  if (!o.precision.empty()) c.precision = o.precision;
  if (!o.out.empty()) c.outputs.directory = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.grid_points) c.grid.n_points = *o.grid_points;
  if (o.N) c.N = *o.N;
  if (!o.source.empty()) c.firstclick.source = o.source;
  if (o.mc_trials) c.firstclick.mc_trials = *o.mc_trials;
  dtt::validate(c);
  return c;
}

void report(const dtt::RunOutput& r) {
  for (const auto& [k, v] : r.summary) std::cout << k << ": " << v << "\n";
  for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

void add_run_options(CLI::App* cmd, Overrides& o) {
  auto* cfg = cmd->add_option("--config", o.config_path, "Configuration file (key = value lines)");
  cmd->add_option("--preset", o.preset, "Built-in configuration")
      ->check(CLI::IsMember({"fig1-top", "fig1-bottom"}))
      ->excludes(cfg);
  cmd->add_option("--precision", o.precision, "Quadrature precision")->check(CLI::IsMember({"std", "ext"}));
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--grid-points", o.grid_points, "Momentum grid size (at least 1000)");
  cmd->add_option("--N", o.N, "Particle count for first-click statistics");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac wavepacket transmission-time distributions"};
  app.require_subcommand(1);
  Overrides o;

  auto* exact = app.add_subcommand("exact", "Exact flux P(t) at the detector");
  auto* sda = app.add_subcommand("sda", "Steepest-descent P_sd(t) and the tau# trace");
  auto* frozen = app.add_subcommand("frozen", "Frozen Gaussian model and first-click timing");
  auto* firstclick = app.add_subcommand("firstclick", "First-click distributions with exact, steepest-descent and photon overlays");
  auto* taumap = app.add_subcommand("taumap", "Re tau contours over complex momentum with the saddle path");
  for (auto* cmd : {exact, sda, frozen, firstclick, taumap}) add_run_options(cmd, o);
  firstclick->add_option("--source", o.source, "Single-particle source")
      ->check(CLI::IsMember({"exact", "sda", "frozen", "photon"}));
  firstclick->add_option("--mc-trials", o.mc_trials, "Monte Carlo trials (0 disables)");

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Re-check output headers against their content");
  verify->add_option("directory", verify_dir, "Output directory of a run")->required();

  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "List presets, or print one as a configuration file");
  presets->add_option("name", preset_name, "Preset to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const dtt::VerifyReport r = dtt::verify_directory(verify_dir);
      for (const auto& f : r.checked) std::cout << "checked " << f << "\n";
      for (const auto& p : r.problems) std::cout << "MISMATCH " << p << "\n";
      std::cout << (r.ok() ? "verify: ok" : "verify: FAILED") << "\n";
      return r.ok() ? 0 : 1;
    }
    if (presets->parsed()) {
      if (preset_name.empty()) {
        for (const auto& n : dtt::preset_names()) std::cout << n << "\n";
      } else {
        std::cout << dtt::serialize(dtt::preset(preset_name));
      }
      return 0;
    }
    const dtt::RunConfig config = resolve(o);
    std::cout << "config_hash: " << dtt::config_hash(config) << "\n";
    if (exact->parsed()) report(dtt::run_exact(config));
    else if (sda->parsed()) report(dtt::run_sda(config));
    else if (frozen->parsed()) report(dtt::run_frozen(config));
    else if (firstclick->parsed()) report(dtt::run_firstclick(config));
    else if (taumap->parsed()) report(dtt::run_taumap(config));
    return 0;
  } catch (const dtt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
