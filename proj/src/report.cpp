#include "rncg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace rncg::report {

namespace {

constexpr double kPanelW = 380.0;
constexpr double kPanelH = 320.0;
constexpr double kMarginL = 62.0;
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 36.0;
constexpr double kMarginB = 48.0;
constexpr double kTitleH = 28.0;
constexpr double kLegendH = 26.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 1e-12 * (1.0 + std::abs(lo))) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

void marker(std::ostringstream& os, int style, double x, double y, const char* color) {
  switch (style % 3) {
    case 0:
      os << "<circle cx=\"" << coord(x) << "\" cy=\"" << coord(y) << "\" r=\"3\" fill=\"none\" stroke=\""
         << color << "\"/>\n";
      break;
    case 1:
      os << "<rect x=\"" << coord(x - 3) << "\" y=\"" << coord(y - 3)
         << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"" << color << "\"/>\n";
      break;
    default:
      os << "<path d=\"M" << coord(x - 3) << ' ' << coord(y - 3) << " L" << coord(x + 3) << ' '
         << coord(y + 3) << " M" << coord(x - 3) << ' ' << coord(y + 3) << " L" << coord(x + 3) << ' '
         << coord(y - 3) << "\" stroke=\"" << color << "\"/>\n";
  }
}

void panel(std::ostringstream& os, const SvgPanel& p, double ox, double oy) {
  Range rx, ry;
  for (const auto& s : p.series) {
    for (const auto& [x, y] : s.points) {
      if (p.log_x && !(x > 0.0)) continue;
      rx.add(p.log_x ? std::log10(x) : x);
      ry.add(y);
    }
  }
  rx.settle();
  ry.settle();
  const double x0 = ox + kMarginL, x1 = ox + kPanelW - kMarginR;
  const double y0 = oy + kPanelH - kMarginB, y1 = oy + kMarginT;
  auto sx = [&](double x) { return x0 + (x1 - x0) * ((p.log_x ? std::log10(x) : x) - rx.lo) / (rx.hi - rx.lo); };
  auto sy = [&](double y) { return y0 + (y1 - y0) * (y - ry.lo) / (ry.hi - ry.lo); };

  os << "<g>\n";
  os << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y1) << "\" width=\"" << coord(x1 - x0)
     << "\" height=\"" << coord(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  os << "<text x=\"" << coord(0.5 * (x0 + x1)) << "\" y=\"" << coord(oy + 22)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(p.title) << "</text>\n";
  os << "<text x=\"" << coord(0.5 * (x0 + x1)) << "\" y=\"" << coord(oy + kPanelH - 8)
     << "\" text-anchor=\"middle\" font-size=\"11\">" << xml_escape(p.xlabel) << "</text>\n";
  os << "<text x=\"" << coord(ox + 14) << "\" y=\"" << coord(0.5 * (y0 + y1))
     << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 " << coord(ox + 14) << ' '
     << coord(0.5 * (y0 + y1)) << ")\">" << xml_escape(p.ylabel) << "</text>\n";

  const double xt[2] = {p.log_x ? std::pow(10.0, rx.lo) : rx.lo, p.log_x ? std::pow(10.0, rx.hi) : rx.hi};
  os << "<text x=\"" << coord(x0) << "\" y=\"" << coord(y0 + 14) << "\" font-size=\"9\">" << num(xt[0])
     << "</text>\n";
  os << "<text x=\"" << coord(x1) << "\" y=\"" << coord(y0 + 14) << "\" text-anchor=\"end\" font-size=\"9\">"
     << num(xt[1]) << "</text>\n";
  os << "<text x=\"" << coord(x0 - 3) << "\" y=\"" << coord(y0) << "\" text-anchor=\"end\" font-size=\"9\">"
     << num(ry.lo) << "</text>\n";
  os << "<text x=\"" << coord(x0 - 3) << "\" y=\"" << coord(y1 + 8) << "\" text-anchor=\"end\" font-size=\"9\">"
     << num(ry.hi) << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = kColors[k % std::size(kColors)];
    if (s.step) {
      std::ostringstream d;
      bool first = true;
      double last_y = 0.0;
      for (const auto& [x, y] : s.points) {
        if (p.log_x && !(x > 0.0)) continue;
        if (first) {
          d << 'M' << coord(sx(x)) << ' ' << coord(sy(y));
          first = false;
        } else {
          d << " L" << coord(sx(x)) << ' ' << coord(sy(last_y)) << " L" << coord(sx(x)) << ' ' << coord(sy(y));
        }
        last_y = y;
      }
      if (!first)
        os << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    } else {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y) || (p.log_x && !(x > 0.0))) continue;
        marker(os, static_cast<int>(k), sx(x), sy(y), color);
      }
    }
  }
  os << "</g>\n";
}

}  // namespace

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
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

std::string render_svg(const std::string& title, const std::vector<SvgPanel>& panels) {
  const double width = kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  const double height = kTitleH + kPanelH + kLegendH;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(width) << "\" height=\""
     << coord(height) << "\" viewBox=\"0 0 " << coord(width) << ' ' << coord(height)
     << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << coord(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(title) << "</text>\n";
  for (std::size_t k = 0; k < panels.size(); ++k)
    panel(os, panels[k], kPanelW * static_cast<double>(k), kTitleH);

  if (!panels.empty()) {
    double lx = 12.0;
    const double ly = kTitleH + kPanelH + 16.0;
    for (std::size_t k = 0; k < panels.front().series.size(); ++k) {
      const auto& s = panels.front().series[k];
      const char* color = kColors[k % std::size(kColors)];
      if (s.step)
        os << "<path d=\"M" << coord(lx) << ' ' << coord(ly - 4) << " L" << coord(lx + 14) << ' '
           << coord(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
      else
        marker(os, static_cast<int>(k), lx + 7, ly - 4, color);
      os << "<text x=\"" << coord(lx + 20) << "\" y=\"" << coord(ly) << "\" font-size=\"11\">"
         << xml_escape(s.label) << "</text>\n";
      lx += 30.0 + 7.0 * static_cast<double>(s.label.size());
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw OutputError("failed writing " + path);
}

}  // namespace rncg::report
