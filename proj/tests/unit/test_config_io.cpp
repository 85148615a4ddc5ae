#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dtt/config.hpp"
#include "dtt/error.hpp"
#include "dtt/output.hpp"
#include "dtt/runs.hpp"

using namespace dtt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

RunConfig small_config(const fs::path& dir) {
  RunConfig c = preset("fig1-top");
  c.grid.n_points = 2000;
  c.times = {0.0, 300.0, 2.0};
  c.outputs.directory = dir.string();
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dtt_unit_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("serialisation round-trips every double bit for bit") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    RunConfig c;
    c.packet.velocity = unit(rng);
    c.packet.width = 1.0 + 20.0 * unit(rng);
    c.packet.offset = 50.0 + 200.0 * unit(rng);
    c.barrier.height = 10.0 * unit(rng);
    c.barrier.width = 30.0 * unit(rng);
    c.grid.q_band = unit(rng);
    c.times.start = -1e3 * unit(rng);
    c.times.step = std::ldexp(unit(rng), -20) + 1e-300;
    c.N = std::exp(600.0 * unit(rng));
    c.seed = rng();
    const RunConfig back = parse_config(serialize(c));
    CHECK(serialize(back) == serialize(c));
    CHECK(back.packet.velocity == c.packet.velocity);
    CHECK(back.times.step == c.times.step);
    CHECK(back.N == c.N);
    CHECK(back.seed == c.seed);
  }
}

TEST_CASE("config hash is stable and sensitive") {
  const RunConfig a = preset("fig1-bottom");
  CHECK(config_hash(a) == config_hash(preset("fig1-bottom")));
  CHECK(config_hash(a).size() == 16);
  RunConfig b = a;
  b.barrier.height = std::nextafter(b.barrier.height, 10.0);
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a) != config_hash(preset("fig1-top")));
}

TEST_CASE("missing physical inputs and unknown keys are rejected by name") {
  std::string text = serialize(preset("fig1-bottom"));
  const auto pos = text.find("barrier.height");
  const std::string without = text.substr(0, pos) + text.substr(text.find('\n', pos) + 1);
  try {
    parse_config(without);
    FAIL("missing barrier.height accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "barrier.height");
  }
  try {
    parse_config(text + "barrier.colour = red\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "barrier.colour");
  }
  CHECK_THROWS_AS(parse_config(text + "N = 3\n"), ConfigError);
  CHECK_THROWS_AS(preset("fig2"), ConfigError);
}

TEST_CASE("presets carry the published parameters") {
  const RunConfig top = preset("fig1-top");
  CHECK(top.packet.velocity == 0.99);
  CHECK(top.packet.width == 10.0);
  CHECK(top.packet.offset == 120.0);
  CHECK(top.barrier.height == 7.5);
  CHECK(top.barrier.width == 10.0);
  CHECK(top.distance() == 130.0);
  const RunConfig bottom = preset("fig1-bottom");
  CHECK(bottom.packet.velocity == 0.99);
  CHECK(bottom.packet.width == 6.0);
  CHECK(bottom.packet.offset == 120.0);
  CHECK(bottom.barrier.height == 6.52);
  CHECK(bottom.barrier.width == 8.0);
  CHECK(bottom.distance() == 128.0);
  CHECK(bottom.N == 1e12);
}

TEST_CASE("reruns are byte-identical and pass verification") {
  const fs::path dir = scratch("rerun");
  const RunConfig c = small_config(dir);
  run_exact(c);
  const std::string first = slurp(dir / "exact.csv");
  const std::string first_svg = slurp(dir / "exact.svg");
  run_exact(c);
  CHECK(slurp(dir / "exact.csv") == first);
  CHECK(slurp(dir / "exact.svg") == first_svg);

  const VerifyReport ok = verify_directory(dir.string());
  CHECK(ok.ok());
  CHECK(ok.checked.size() >= 3);

  const Header svg = read_header((dir / "exact.svg").string());
  REQUIRE(svg.find("y_min"));
  REQUIRE(svg.find("floor"));
  CHECK(std::stod(*svg.find("y_min")) >= std::stod(*svg.find("floor")));
  CHECK(*svg.find("precision") == "ext");
  CHECK(*svg.find("config_hash") == config_hash(c));
  fs::remove_all(dir);
}

TEST_CASE("verification detects a tampered floor and a foreign hash") {
  const fs::path dir = scratch("tamper");
  const RunConfig c = small_config(dir);
  run_exact(c);
  const fs::path csv = dir / "exact.csv";
  std::string text = slurp(csv);
  const auto pos = text.find("# floor: ");
  REQUIRE(pos != std::string::npos);
  const auto end = text.find('\n', pos);
  spit(csv, text.substr(0, pos) + "# floor: 1e-50" + text.substr(end));
  CHECK_FALSE(verify_directory(dir.string()).ok());

  spit(csv, text);
  CHECK(verify_directory(dir.string()).ok());
  RunConfig other = c;
  other.seed = 99;
  spit(dir / "config.txt", serialize(other));
  CHECK_FALSE(verify_directory(dir.string()).ok());
  fs::remove_all(dir);
}

TEST_CASE("table write and read round-trip") {
  const fs::path dir = scratch("table");
  fs::create_directories(dir);
  Table t;
  t.header.set("floor", 1e-30);
  t.columns = {"time", "density"};
  t.data = {{0.0, 0.5, 1.0}, {1e-310, std::nan(""), 0.1 + 0.2}};
  write_table((dir / "t.csv").string(), t);
  const Table back = read_table((dir / "t.csv").string());
  CHECK(back.columns == t.columns);
  CHECK(back.data[0] == t.data[0]);
  CHECK(back.data[1][0] == 1e-310);
  CHECK(std::isnan(back.data[1][1]));
  CHECK(back.data[1][2] == 0.1 + 0.2);
  CHECK(*back.header.find("floor") == format_number(1e-30));
  fs::remove_all(dir);
}

TEST_CASE("marching squares traces the isoline of a linear field") {
  TauMap m;
  m.re_lo = 0.0;
  m.re_hi = 1.0;
  m.im_lo = 0.0;
  m.im_hi = 1.0;
  m.nx = 11;
  m.ny = 9;
  m.re_tau.resize(m.nx * m.ny);
  for (std::size_t iy = 0; iy < m.ny; ++iy)
    for (std::size_t ix = 0; ix < m.nx; ++ix) m.re_tau[iy * m.nx + ix] = m.x(ix) + 2.0 * m.y(iy);
  const auto segs = marching_squares(m, 1.3);
  REQUIRE(!segs.empty());
  for (const Segment& s : segs) {
    CHECK(s.x0 + 2.0 * s.y0 == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(s.x1 + 2.0 * s.y1 == doctest::Approx(1.3).epsilon(1e-12));
  }
  CHECK(marching_squares(m, 5.0).empty());
}
