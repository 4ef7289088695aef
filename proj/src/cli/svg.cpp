#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ihd/cli.hpp"

namespace ihd::cli {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 80.0, kRight = 630.0, kTop = 50.0, kBottom = 550.0;
constexpr int kTicks = 10;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v, bool log_axis) {
  char buf[40];
  if (log_axis)
    std::snprintf(buf, sizeof buf, "%.3g", std::pow(10.0, v));
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double transform(double v, bool log_axis) {
  if (!log_axis) return v;
  return std::log10(std::max(v, 1e-30));
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel, bool logx,
                       bool logy) {
  if (series.empty()) throw ConfigError("no series to plot");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) throw ConfigError("series x/y length mismatch");
    if (s.x.empty()) throw ConfigError("no data rows");
    for (double v : s.x) {
      const double t = transform(v, logx);
      xmin = std::min(xmin, t);
      xmax = std::max(xmax, t);
    }
    for (double v : s.y) {
      const double t = transform(v, logy);
      ymin = std::min(ymin, t);
      ymax = std::max(ymax, t);
    }
  }
  if (xmin == xmax) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymin == ymax) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double xpad = 0.02 * (xmax - xmin), ypad = 0.02 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const auto px = [&](double v) {
    return kLeft + (transform(v, logx) - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  const auto py = [&](double v) {
    return kBottom - (transform(v, logy) - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"18\">" + xml_escape(title) + "</text>\n";

  for (int t = 0; t <= kTicks; ++t) {
    const double fx = xmin + (xmax - xmin) * t / kTicks;
    const double gx = kLeft + (kRight - kLeft) * t / kTicks;
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(gx) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(gx) + "\" y=\"" + num(kBottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(fx, logx) + "</text>\n";
    const double fy = ymin + (ymax - ymin) * t / kTicks;
    const double gy = kBottom - (kBottom - kTop) * t / kTicks;
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(kRight) +
           "\" y2=\"" + num(gy) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8.0) + "\" y=\"" + num(gy + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(fy, logy) + "</text>\n";
  }

  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(kRight - kLeft) + "\" height=\"" + num(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" + num(kHeight - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         xml_escape(xlabel) + "</text>\n";
  svg += "<text x=\"22\" y=\"" + num((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 22 " + num((kTop + kBottom) / 2) + ")\">" +
         xml_escape(ylabel) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (std::size_t i = 0; i < series[si].x.size(); ++i) {
      if (!pts.empty()) pts += ' ';
      pts += num(px(series[si].x[i])) + "," + num(py(series[si].y[i]));
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    const double ly = kTop + 16.0 + 20.0 * static_cast<double>(si);
    svg += "<line x1=\"" + num(kRight + 14.0) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(kRight + 44.0) + "\" y2=\"" + num(ly) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kRight + 50.0) + "\" y=\"" + num(ly + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           xml_escape(series[si].label) + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace ihd::cli
