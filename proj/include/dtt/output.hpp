#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dtt/saddle.hpp"

namespace dtt {

/// Metadata written at the top of every artifact. CSV and text files carry it
/// as `# key: value` lines, SVG files inside a leading XML comment.
struct Header {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  const std::string* find(const std::string& key) const;
};

/// %.17g, or "nan" / "inf" / "-inf".
std::string format_number(double x);

struct Table {
  Header header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  ///< one vector per column

  const std::vector<double>* column(const std::string& name) const;
};

void write_table(const std::string& path, const Table& table);
Table read_table(const std::string& path);

/// Plain `key: value` summary block after the header.
void write_summary(const std::string& path, const Header& header,
                   const std::vector<std::pair<std::string, std::string>>& lines);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string colour = "#1f77b4";
  double stroke_width = 1.5;
  bool dashed = false;
};

struct Marker {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  /// Lower clip for log plots; no drawn value lies below it.
  double floor = 0.0;
  std::vector<Series> series;
  std::vector<Marker> markers;
};

void write_svg_plot(const std::string& path, const Plot& plot, const Header& header);

/// Filled contour lines of Re tau over the complex momentum plane, the level
/// `highlight` drawn thick, and the saddle path overlaid as dots.
void write_svg_contours(const std::string& path, const TauMap& map, const std::vector<double>& levels,
                        double highlight, const Header& header);

/// Line segments of the `level` isoline of a row-major field, by marching
/// squares. Cells with a NaN corner are skipped.
struct Segment {
  double x0, y0, x1, y1;
};
std::vector<Segment> marching_squares(const TauMap& map, double level);

/// Reads the header of any artifact (CSV, text or SVG).
Header read_header(const std::string& path);

struct VerifyReport {
  std::vector<std::string> checked;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Checks every artifact in `directory` against the manifest `config.txt`:
/// hash, precision and floor present and consistent; CSV floors recomputed
/// from the stored density; cumulative, tail and C_trans consistent with the
/// stored columns.
VerifyReport verify_directory(const std::string& directory);

}  // namespace dtt
