#include "dtt/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dtt/config.hpp"
#include "dtt/double_double.hpp"
#include "dtt/error.hpp"
#include "dtt/propagator.hpp"

namespace dtt {

namespace fs = std::filesystem;

void Header::set(const std::string& key, const std::string& value) {
  for (auto& e : entries)
    if (e.first == key) {
      e.second = value;
      return;
    }
  entries.emplace_back(key, value);
}

void Header::set(const std::string& key, double value) { set(key, format_number(value)); }

const std::string* Header::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.first == key) return &e.second;
  return nullptr;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  // strtod rather than stod: subnormal values must parse, not throw.
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return x;
}

std::ofstream open_for_write(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void write_hash_header(std::ostream& out, const Header& header) {
  for (const auto& [k, v] : header.entries) out << "# " << k << ": " << v << "\n";
}

bool parse_header_line(const std::string& line, Header& h) {
  if (line.rfind("# ", 0) != 0) return false;
  const auto colon = line.find(": ", 2);
  if (colon == std::string::npos) return false;
  h.entries.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
  return true;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double x, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Header block inside an SVG comment; "--" is not allowed there.
void write_svg_header(std::ostream& out, const Header& header) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n";
  for (const auto& [k, v] : header.entries) {
    std::string value = v;
    for (std::size_t pos; (pos = value.find("--")) != std::string::npos;) value.replace(pos, 2, "- -");
    out << "# " << k << ": " << value << "\n";
  }
  out << "-->\n";
}

struct Axis {
  double lo, hi;
  bool log;
  double pix_lo, pix_hi;
  double map(double v) const {
    const double f = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return pix_lo + f * (pix_hi - pix_lo);
  }
};

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
    ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  const int d0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
  const int d1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
  const int stride = std::max(1, (d1 - d0) / 8);
  std::vector<double> ticks;
  for (int d = d1; d >= d0; d -= stride) ticks.push_back(std::pow(10.0, d));
  std::reverse(ticks.begin(), ticks.end());
  return ticks;
}

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

void draw_frame(std::ostream& out, const std::string& title, const std::string& xl, const std::string& yl,
                const Axis& ax, const Axis& ay) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kTop - 14 << "\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
      << xml_escape(xl) << "</text>\n";
  out << "<text transform=\"translate(22," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(yl) << "</text>\n";
  for (double t : ax.log ? log_ticks(ax.lo, ax.hi) : linear_ticks(ax.lo, ax.hi)) {
    const double px = ax.map(t);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
        << "\" stroke=\"black\"/><text x=\"" << px << "\" y=\"" << y0 + 19 << "\" text-anchor=\"middle\">"
        << fmt(t) << "</text>\n";
  }
  for (double t : ay.log ? log_ticks(ay.lo, ay.hi) : linear_ticks(ay.lo, ay.hi)) {
    const double py = ay.map(t);
    out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
        << "\" stroke=\"black\"/><text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
        << fmt(t) << "</text>\n";
  }
}

}  // namespace

const std::vector<double>* Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return &data[i];
  return nullptr;
}

void write_table(const std::string& path, const Table& table) {
  if (table.columns.size() != table.data.size()) throw std::logic_error("table column count mismatch");
  const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
  for (const auto& c : table.data)
    if (c.size() != rows) throw std::logic_error("table columns differ in length");
  auto out = open_for_write(path);
  write_hash_header(out, table.header);
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
  out << "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < table.data.size(); ++j) out << (j ? "," : "") << format_number(table.data[j][i]);
    out << "\n";
  }
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  Table t;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_columns && line[0] == '#') {
      parse_header_line(line, t.header);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!have_columns) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      t.data.resize(t.columns.size());
      have_columns = true;
      continue;
    }
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= t.data.size()) throw std::runtime_error(path + ": row has too many cells");
      t.data[j++].push_back(parse_number(cell));
    }
    if (j != t.data.size()) throw std::runtime_error(path + ": row has too few cells");
  }
  return t;
}

void write_summary(const std::string& path, const Header& header,
                   const std::vector<std::pair<std::string, std::string>>& lines) {
  auto out = open_for_write(path);
  write_hash_header(out, header);
  for (const auto& [k, v] : lines) out << k << ": " << v << "\n";
}

void write_svg_plot(const std::string& path, const Plot& plot, const Header& header) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (plot.log_y && !(s.y[i] > 0.0))) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  if (!(xhi > xlo) || !(yhi >= ylo)) throw std::runtime_error("plot '" + plot.title + "' has no finite data");
  double bottom, top;
  if (plot.log_y) {
    top = std::pow(10.0, std::ceil(std::log10(yhi)));
    bottom = plot.floor > 0.0 ? plot.floor : top * 1e-40;
    bottom = std::max(bottom, top * 1e-300);
    if (!(top > bottom)) top = bottom * 10.0;
  } else {
    const double pad = 0.05 * std::max(yhi - ylo, std::abs(yhi) * 1e-6 + 1e-300);
    bottom = ylo - pad;
    top = yhi + pad;
  }
  Header h = header;
  h.set("y_min", bottom);
  h.set("log_y", plot.log_y ? "true" : "false");
  const Axis ax{xlo, xhi, false, kLeft, kWidth - kRight};
  const Axis ay{bottom, top, plot.log_y, kHeight - kBottom, kTop};
  auto out = open_for_write(path);
  write_svg_header(out, h);
  draw_frame(out, plot.title, plot.x_label, plot.y_label, ax, ay);

  for (const auto& s : plot.series) {
    std::string points;
    auto flush = [&] {
      if (!points.empty())
        out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"" << s.stroke_width << "\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (!std::isfinite(y) || y < bottom || y > top) {
        flush();
        continue;
      }
      points += fmt(ax.map(s.x[i]), 7) + "," + fmt(ay.map(y), 7) + " ";
    }
    flush();
  }
  for (const auto& m : plot.markers) {
    if (!(m.y >= bottom && m.y <= top)) continue;
    out << "<circle cx=\"" << ax.map(m.x) << "\" cy=\"" << ay.map(m.y) << "\" r=\"4\" fill=\"black\"/>";
    if (!m.label.empty())
      out << "<text x=\"" << ax.map(m.x) + 7 << "\" y=\"" << ay.map(m.y) - 7 << "\">" << xml_escape(m.label)
          << "</text>";
    out << "\n";
  }
  double ly = kTop + 10;
  for (const auto& s : plot.series) {
    const double lx = kWidth - kRight + 12;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
        << s.colour << "\" stroke-width=\"" << s.stroke_width << "\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/><text x=\"" << lx + 30 << "\" y=\"" << ly + 4
        << "\">" << xml_escape(s.name) << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
}

std::vector<Segment> marching_squares(const TauMap& map, double level) {
  std::vector<Segment> segs;
  auto lerp = [&](double xa, double ya, double va, double xb, double yb, double vb) {
    const double f = (level - va) / (vb - va);
    return std::pair<double, double>{xa + f * (xb - xa), ya + f * (yb - ya)};
  };
  for (std::size_t iy = 0; iy + 1 < map.ny; ++iy)
    for (std::size_t ix = 0; ix + 1 < map.nx; ++ix) {
      // Corners counter-clockwise from bottom-left.
      const double v[4] = {map.at(ix, iy), map.at(ix + 1, iy), map.at(ix + 1, iy + 1), map.at(ix, iy + 1)};
      if (std::isnan(v[0]) || std::isnan(v[1]) || std::isnan(v[2]) || std::isnan(v[3])) continue;
      const double xs[4] = {map.x(ix), map.x(ix + 1), map.x(ix + 1), map.x(ix)};
      const double ys[4] = {map.y(iy), map.y(iy), map.y(iy + 1), map.y(iy + 1)};
      std::vector<std::pair<double, double>> cuts;
      for (int a = 0; a < 4; ++a) {
        const int b = (a + 1) % 4;
        if ((v[a] < level) != (v[b] < level)) cuts.push_back(lerp(xs[a], ys[a], v[a], xs[b], ys[b], v[b]));
      }
      const std::size_t n = cuts.size();
      if (n == 2) {
        segs.push_back({cuts[0].first, cuts[0].second, cuts[1].first, cuts[1].second});
      } else if (n == 4) {
        // Saddle cell: the centre value decides which corners connect.
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool joined = (centre < level) == (v[0] < level);
        if (joined) {
          segs.push_back({cuts[0].first, cuts[0].second, cuts[1].first, cuts[1].second});
          segs.push_back({cuts[2].first, cuts[2].second, cuts[3].first, cuts[3].second});
        } else {
          segs.push_back({cuts[0].first, cuts[0].second, cuts[3].first, cuts[3].second});
          segs.push_back({cuts[1].first, cuts[1].second, cuts[2].first, cuts[2].second});
        }
      }
    }
  return segs;
}

void write_svg_contours(const std::string& path, const TauMap& map, const std::vector<double>& levels,
                        double highlight, const Header& header) {
  const Axis ax{map.re_lo, map.re_hi, false, kLeft, kWidth - kRight};
  const Axis ay{map.im_lo, map.im_hi, false, kHeight - kBottom, kTop};
  auto out = open_for_write(path);
  write_svg_header(out, header);
  draw_frame(out, "Re tau(p) contours (lambda-bar/c), thick: " + fmt(highlight), "Re p (mc)", "Im p (mc)", ax, ay);
  out << "<clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kRight - kLeft << "\" height=\"" << kHeight - kBottom - kTop << "\"/></clipPath>\n";
  out << "<g clip-path=\"url(#plot)\">\n";
  auto draw_level = [&](double level, const char* colour, double width) {
    const auto segs = marching_squares(map, level);
    if (segs.empty()) return;
    out << "<path fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << width << "\" d=\"";
    for (const auto& s : segs)
      out << "M" << fmt(ax.map(s.x0), 7) << "," << fmt(ay.map(s.y0), 7) << "L" << fmt(ax.map(s.x1), 7) << ","
          << fmt(ay.map(s.y1), 7);
    out << "\"/>\n";
  };
  for (double level : levels)
    if (level != highlight) draw_level(level, "#8c8c8c", 0.8);
  draw_level(highlight, "black", 2.5);
  for (const auto& p : map.path)
    if (p.real() >= map.re_lo && p.real() <= map.re_hi && p.imag() >= map.im_lo && p.imag() <= map.im_hi)
      out << "<circle cx=\"" << fmt(ax.map(p.real()), 7) << "\" cy=\"" << fmt(ay.map(p.imag()), 7)
          << "\" r=\"3\" fill=\"#d62728\"/>\n";
  out << "</g>\n";
  const double lx = kWidth - kRight + 12;
  out << "<line x1=\"" << lx << "\" y1=\"" << kTop + 10 << "\" x2=\"" << lx + 24 << "\" y2=\"" << kTop + 10
      << "\" stroke=\"black\" stroke-width=\"2.5\"/><text x=\"" << lx + 30 << "\" y=\"" << kTop + 14
      << "\">Re tau = " << fmt(highlight) << "</text>\n";
  out << "<circle cx=\"" << lx + 12 << "\" cy=\"" << kTop + 30 << "\" r=\"3\" fill=\"#d62728\"/><text x=\""
      << lx + 30 << "\" y=\"" << kTop + 34 << "\">saddle path</text>\n";
  out << "</svg>\n";
}

Header read_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  Header h;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("<?xml", 0) == 0 || line == "<!--") continue;
    if (!parse_header_line(line, h)) break;
  }
  return h;
}

VerifyReport verify_directory(const std::string& directory) {
  VerifyReport report;
  const fs::path dir(directory);
  const fs::path manifest = dir / "config.txt";
  if (!fs::exists(manifest)) {
    report.problems.push_back(manifest.string() + ": manifest missing");
    return report;
  }
  const RunConfig config = load_config(manifest.string());
  const std::string hash = config_hash(config);
  const std::string precision = to_string(config.precision_mode());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() != "config.txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    const std::string ext = file.extension().string();
    if (ext != ".csv" && ext != ".svg" && ext != ".txt") continue;
    const std::string name = file.filename().string();
    auto problem = [&](const std::string& what) { report.problems.push_back(name + ": " + what); };
    report.checked.push_back(name);
    const Header h = read_header(file.string());
    const std::string* fh = h.find("config_hash");
    const std::string* fp = h.find("precision");
    const std::string* ff = h.find("floor");
    if (!fh || *fh != hash) problem("config hash does not match the manifest");
    if (!fp || *fp != precision) problem("precision does not match the manifest");
    if (!ff) {
      problem("floor missing from header");
      continue;
    }
    const double floor = parse_number(*ff);
    if (ext == ".svg") {
      const std::string* ymin = h.find("y_min");
      const std::string* log = h.find("log_y");
      if (log && *log == "true" && (!ymin || parse_number(*ymin) < floor)) problem("log axis extends below the floor");
      continue;
    }
    if (ext != ".csv") continue;
    Table t;
    try {
      t = read_table(file.string());
    } catch (const std::exception& e) {
      problem(e.what());
      continue;
    }
    const auto* time = t.column("time");
    const std::string* dcol = h.find("density_column");
    const auto* density = dcol ? t.column(*dcol) : nullptr;
    if (!time) continue;
    if (const std::string* dist = h.find("distance"); dist && density && h.find("floor_rule")) {
      const double recomputed = estimate_floor(*time, *density, parse_number(*dist));
      if (format_number(recomputed) != *ff) problem("floor " + *ff + " differs from recomputed " + format_number(recomputed));
    }
    const auto* cumulative = t.column("cumulative");
    const auto* tail = t.column("tail");
    if (cumulative && tail) {
      for (std::size_t i = 0; i < tail->size(); ++i)
        if ((*tail)[i] != 1.0 - (*cumulative)[i]) {
          problem("tail is not 1 - cumulative at row " + std::to_string(i));
          break;
        }
    }
    const std::string* rule = h.find("cumulative_rule");
    if (cumulative && density && rule && *rule == "trapezoid") {
      CompensatedSum acc;
      double worst = 0.0;
      const double scale = std::max(std::abs(cumulative->back()), 1e-300);
      for (std::size_t i = 1; i < time->size(); ++i) {
        acc.add(0.5 * ((*time)[i] - (*time)[i - 1]) * ((*density)[i] + (*density)[i - 1]));
        worst = std::max(worst, std::abs(acc.value() - (*cumulative)[i]) / scale);
      }
      if (worst > 1e-12) problem("cumulative is not the trapezoid integral of the density (" + fmt(worst) + ")");
    }
    if (const std::string* ct = h.find("C_trans"); ct && cumulative && rule && *rule == "trapezoid") {
      const double c = parse_number(*ct);
      if (std::abs(c - cumulative->back()) > 1e-12 * std::abs(c)) problem("C_trans differs from the final cumulative");
    }
  }
  return report;
}

}  // namespace dtt
