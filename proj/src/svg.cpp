#include "lanestab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include <fmt/format.h>

#include "lanestab/errors.hpp"

namespace lanestab {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

std::string render_svg(const Chart& chart) {
  if (chart.series.empty()) {
    throw ValidationError("input", "nothing to plot");
  }
  Range rx, ry;
  for (const auto& s : chart.series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(v);
  }
  for (const auto& m : chart.markers) {
    rx.add(m.x);
    ry.add(m.y);
  }
  rx.finish();
  ry.finish();

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  const auto py = [&](double y) { return kTop + (ry.hi - y) / (ry.hi - ry.lo) * ph; };

  fmt::memory_buffer out;
  auto it = std::back_inserter(out);
  fmt::format_to(it,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" "
                 "height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
                 kWidth, kHeight, kWidth, kHeight);
  fmt::format_to(it, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::format_to(it,
                 "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" "
                 "height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                 kLeft, kTop, pw, ph);

  // Five ticks per axis.
  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    fmt::format_to(it,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
                   "text-anchor=\"middle\">{:.3g}</text>\n",
                   px(fx), kTop + ph + 16.0, fx);
    fmt::format_to(it,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
                   "text-anchor=\"end\">{:.3g}</text>\n",
                   kLeft - 6.0, py(fy) + 4.0, fy);
  }
  if (ry.lo < 0.0 && ry.hi > 0.0) {
    fmt::format_to(it,
                   "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" "
                   "y2=\"{:.2f}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                   kLeft, py(0.0), kLeft + pw, py(0.0));
  }

  fmt::format_to(it,
                 "<text x=\"{:.2f}\" y=\"24\" font-size=\"15\" "
                 "text-anchor=\"middle\">{}</text>\n",
                 kLeft + pw / 2.0, escape(chart.title));
  fmt::format_to(it,
                 "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" "
                 "text-anchor=\"middle\">{}</text>\n",
                 kLeft + pw / 2.0, kHeight - 12.0, escape(chart.x_label));
  fmt::format_to(it,
                 "<text x=\"16\" y=\"{:.2f}\" font-size=\"13\" "
                 "text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2f})\">"
                 "{}</text>\n",
                 kTop + ph / 2.0, kTop + ph / 2.0, escape(chart.y_label));

  std::size_t index = 0;
  for (const auto& s : chart.series) {
    const char* color = kPalette[index % std::size(kPalette)];
    fmt::format_to(it,
                   "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
                   "points=\"",
                   color);
    const std::size_t count = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      fmt::format_to(it, "{}{:.2f},{:.2f}", i == 0 ? "" : " ", px(s.x[i]),
                     py(s.y[i]));
    }
    fmt::format_to(it, "\"/>\n");
    fmt::format_to(it,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" "
                   "fill=\"{}\" text-anchor=\"end\">{}</text>\n",
                   kLeft + pw - 8.0, kTop + 16.0 + 15.0 * index, color,
                   escape(s.label));
    ++index;
  }

  for (const auto& m : chart.markers) {
    fmt::format_to(it,
                   "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"{}\">"
                   "<title>{}</title></circle>\n",
                   px(m.x), py(m.y), escape(m.color), escape(m.label));
  }
  fmt::format_to(it, "</svg>\n");
  return fmt::to_string(out);
}

}  // namespace lanestab
