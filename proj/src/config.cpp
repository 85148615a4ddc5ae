#include "dtt/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dtt/error.hpp"

namespace dtt {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
    throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& v) {
  // Accept integral values written in floating notation such as 1e6.
  const double x = parse_double(key, v);
  if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19) throw ConfigError(key, "expected a non-negative integer");
  return static_cast<Int>(x);
}

// One entry per serialised field: how to print it and how to set it.
struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
  bool required = false;
};

#define DTT_DOUBLE(path, req)                                                                     \
  Field {                                                                                         \
    #path, [](const RunConfig& c) { return format_double(c.path); },                             \
        [](RunConfig& c, const std::string& v) { c.path = parse_double(#path, v); }, req          \
  }
#define DTT_SIZE(path)                                                                            \
  Field {                                                                                         \
    #path, [](const RunConfig& c) { return std::to_string(c.path); },                            \
        [](RunConfig& c, const std::string& v) { c.path = parse_integer<std::size_t>(#path, v); }, \
        false                                                                                     \
  }
#define DTT_STRING(path)                                                                          \
  Field {                                                                                         \
    #path, [](const RunConfig& c) { return c.path; },                                            \
        [](RunConfig& c, const std::string& v) { c.path = v; }, false                             \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      DTT_STRING(name),
      DTT_DOUBLE(packet.velocity, true),
      DTT_DOUBLE(packet.width, true),
      DTT_DOUBLE(packet.offset, true),
      DTT_DOUBLE(barrier.height, true),
      DTT_DOUBLE(barrier.width, true),
      DTT_SIZE(grid.n_points),
      DTT_DOUBLE(grid.refinement_ratio, false),
      DTT_DOUBLE(grid.q_band, false),
      DTT_DOUBLE(grid.half_width_sigmas, false),
      DTT_DOUBLE(times.start, false),
      DTT_DOUBLE(times.stop, false),
      DTT_DOUBLE(times.step, false),
      DTT_DOUBLE(N, false),
      DTT_STRING(precision),
      Field{"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
            [](RunConfig& c, const std::string& v) {
              std::uint64_t s = 0;
              const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
              if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
                throw ConfigError("seed", "expected an unsigned integer, got '" + v + "'");
              c.seed = s;
            },
            false},
      DTT_STRING(outputs.directory),
      DTT_STRING(outputs.formats),
      DTT_STRING(firstclick.source),
      DTT_DOUBLE(firstclick.silence_fraction, false),
      DTT_SIZE(firstclick.mc_trials),
      DTT_DOUBLE(taumap.re_lo, false),
      DTT_DOUBLE(taumap.re_hi, false),
      DTT_DOUBLE(taumap.im_lo, false),
      DTT_DOUBLE(taumap.im_hi, false),
      DTT_SIZE(taumap.nx),
      DTT_SIZE(taumap.ny),
      DTT_DOUBLE(taumap.path_spacing, false),
  };
  return f;
}

#undef DTT_DOUBLE
#undef DTT_SIZE
#undef DTT_STRING

}  // namespace

PacketSpec RunConfig::packet_spec() const { return make_packet(packet.velocity, packet.width, 0.0); }

BarrierSpec RunConfig::barrier_spec() const { return make_barrier(barrier.height, packet.offset, barrier.width); }

GridOptions RunConfig::grid_options() const {
  GridOptions o;
  o.refinement_ratio = grid.refinement_ratio;
  o.q_band = grid.q_band;
  o.half_width_sigmas = grid.half_width_sigmas;
  return o;
}

Precision RunConfig::precision_mode() const { return precision_from_string(precision); }

std::vector<double> RunConfig::time_grid() const { return time_range(times.start, times.stop, times.step); }

bool RunConfig::wants(const std::string& format) const {
  std::stringstream ss(outputs.formats);
  std::string item;
  while (std::getline(ss, item, ','))
    if (trim(item) == format) return true;
  return false;
}

std::string serialize(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, const Field*> by_key;
  for (const auto& f : fields()) by_key[f.key] = &f;
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError(key, "unknown configuration key");
    if (!seen.insert(key).second) throw ConfigError(key, "key given twice");
    it->second->set(c, value);
  }
  for (const auto& f : fields())
    if (f.required && !seen.count(f.key)) throw ConfigError(f.key, "required key is missing");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  if (!(c.packet.velocity > 0.0 && c.packet.velocity < 1.0))
    throw ConfigError("packet.velocity", "must lie in (0, 1)");
  if (!(c.packet.width > 0.0)) throw ConfigError("packet.width", "must be positive");
  if (!(c.packet.offset > 0.0)) throw ConfigError("packet.offset", "must be positive");
  if (!(c.barrier.height >= 0.0)) throw ConfigError("barrier.height", "must be non-negative");
  if (!(c.barrier.width >= 0.0)) throw ConfigError("barrier.width", "must be non-negative");
  if (c.grid.n_points < 1000) throw ConfigError("grid.n_points", "must be at least 1000");
  if (!(c.grid.refinement_ratio >= 1.0)) throw ConfigError("grid.refinement_ratio", "must be >= 1");
  if (!(c.grid.q_band > 0.0 && c.grid.q_band < 1.0)) throw ConfigError("grid.q_band", "must lie in (0, 1)");
  if (!(c.grid.half_width_sigmas >= 8.0)) throw ConfigError("grid.half_width_sigmas", "must be >= 8");
  if (!(c.times.step > 0.0)) throw ConfigError("times.step", "must be positive");
  if (!(c.times.stop > c.times.start)) throw ConfigError("times.stop", "must exceed times.start");
  if (!(c.N >= 1.0)) throw ConfigError("N", "must be >= 1");
  precision_from_string(c.precision);
  if (c.firstclick.source != "exact" && c.firstclick.source != "sda" && c.firstclick.source != "frozen" &&
      c.firstclick.source != "photon")
    throw ConfigError("firstclick.source", "expected exact, sda, frozen or photon");
  if (!(c.firstclick.silence_fraction >= 0.0)) throw ConfigError("firstclick.silence_fraction", "must be >= 0");
  if (!(c.taumap.re_hi > c.taumap.re_lo)) throw ConfigError("taumap.re_hi", "must exceed taumap.re_lo");
  if (!(c.taumap.im_hi > c.taumap.im_lo)) throw ConfigError("taumap.im_hi", "must exceed taumap.im_lo");
  if (c.taumap.nx < 2) throw ConfigError("taumap.nx", "must be at least 2");
  if (c.taumap.ny < 2) throw ConfigError("taumap.ny", "must be at least 2");
  if (!(c.taumap.path_spacing > 0.0)) throw ConfigError("taumap.path_spacing", "must be positive");
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : serialize(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() { return {"fig1-top", "fig1-bottom"}; }

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.name = name;
  if (name == "fig1-top") {
    c.packet = {0.99, 10.0, 120.0};
    c.barrier = {7.5, 10.0};
    c.grid.n_points = 100000;
    c.taumap = {6.5, 7.6, -1.0, 2.0, 221, 151, 10.0};
  } else if (name == "fig1-bottom") {
    c.packet = {0.99, 6.0, 120.0};
    c.barrier = {6.52, 8.0};
    c.grid.n_points = 1000000;
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "' (expected fig1-top or fig1-bottom)");
  }
  return c;
}

}  // namespace dtt
