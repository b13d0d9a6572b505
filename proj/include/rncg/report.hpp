#pragma once

// Text emitters: CSV number formatting, static SVG charts, file output.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rncg::report {

/// Could not create or write an output file.
class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string num(double v);

std::string xml_escape(const std::string& s);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool step = false;  // draw as a right-continuous step curve instead of markers
};

struct SvgPanel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  std::vector<SvgSeries> series;
};

/// Panels side by side, one shared legend.
std::string render_svg(const std::string& title, const std::vector<SvgPanel>& panels);

/// Creates parent directories; writes bytes verbatim. Throws OutputError.
void write_file(const std::string& path, const std::string& content);

}  // namespace rncg::report
