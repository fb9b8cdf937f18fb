#include "mlloss/svg.hpp"

#include <cstdio>

namespace mlloss {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 64.0, kRight = 150.0, kTop = 32.0, kBottom = 48.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_convergence_chart(const std::vector<ChartSeries>& series,
                                     const std::string& y_label) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  std::size_t epochs = 0;
  for (const auto& s : series) epochs = std::max(epochs, s.values.size());

  auto x_at = [&](std::size_t epoch_idx) {  // 0-based
    if (epochs <= 1) return kLeft + plot_w / 2.0;
    return kLeft + plot_w * static_cast<double>(epoch_idx) /
                       static_cast<double>(epochs - 1);
  };
  auto y_at = [&](double v) { return kTop + plot_h * (1.0 - v); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
         fmt(kHeight) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  out += "  <line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
         fmt(kLeft) + "\" y2=\"" + fmt(kTop + plot_h) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "  <line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + plot_h) +
         "\" x2=\"" + fmt(kLeft + plot_w) + "\" y2=\"" + fmt(kTop + plot_h) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // y ticks every 0.25
  for (int i = 0; i <= 4; ++i) {
    double v = 0.25 * i;
    double y = y_at(v);
    out += "  <line x1=\"" + fmt(kLeft - 4) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
           fmt(kLeft) + "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
    out += "  <text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + fmt(v) + "</text>\n";
  }
  // x ticks: first, last, and up to four in between
  if (epochs > 0) {
    std::size_t step = epochs > 5 ? (epochs - 1) / 5 + 1 : 1;
    for (std::size_t e = 0; e < epochs; e += step) {
      double x = x_at(e);
      out += "  <line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop + plot_h) +
             "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(kTop + plot_h + 4) +
             "\" stroke=\"black\"/>\n";
      out += "  <text x=\"" + fmt(x) + "\" y=\"" + fmt(kTop + plot_h + 18) +
             "\" text-anchor=\"middle\" font-size=\"12\">" + std::to_string(e + 1) +
             "</text>\n";
    }
  }
  out += "  <text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 8) +
         "\" text-anchor=\"middle\" font-size=\"13\">epoch</text>\n";
  out += "  <text x=\"16\" y=\"" + fmt(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
         fmt(kTop + plot_h / 2) + ")\">" + y_label + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    const char* color = kPalette[s % kPaletteSize];
    std::string points;
    for (std::size_t e = 0; e < sr.values.size(); ++e) {
      if (!points.empty()) points += " ";
      points += fmt(x_at(e)) + "," + fmt(y_at(sr.values[e]));
    }
    out += "  <polyline class=\"series\" data-name=\"" + sr.name +
           "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
    double ly = kTop + 16.0 + 18.0 * static_cast<double>(s);
    out += "  <line x1=\"" + fmt(kLeft + plot_w + 10) + "\" y1=\"" + fmt(ly - 4) +
           "\" x2=\"" + fmt(kLeft + plot_w + 34) + "\" y2=\"" + fmt(ly - 4) +
           "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
    out += "  <text x=\"" + fmt(kLeft + plot_w + 40) + "\" y=\"" + fmt(ly) +
           "\" font-size=\"12\">" + sr.name + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace mlloss
