#include "heaping/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace heaping::cli::svg {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 20, kTop = 36, kBottom = 50;
constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;

std::string f2(double v) {
  if (!std::isfinite(v)) v = 0.0;
  std::array<char, 48> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  return std::string(buf.data(), ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
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
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (lo == hi) lo -= 0.5, hi += 0.5;
  }
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string tick_label(double v, double step) {
  if (std::fabs(v) < step * 1e-9) v = 0.0;
  std::array<char, 48> buf{};
  const int digits = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), ptr);
}

class Canvas {
 public:
  Canvas(const RunInfo& run, const std::string& title) {
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" + run.xml_comment() +
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) + "\" height=\"" + f2(kHeight) +
           "\" viewBox=\"0 0 " + f2(kWidth) + " " + f2(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" + f2(kWidth / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
  }

  void set_ranges(Range x, Range y) {
    x_ = x;
    y_ = y;
  }
  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * kPlotW; }
  double py(double y) const { return kTop + kPlotH - (y - y_.lo) / (y_.hi - y_.lo) * kPlotH; }

  void axes(const std::string& x_label, const std::string& y_label, bool x_ticks = true) {
    out_ += "<rect x=\"" + f2(kLeft) + "\" y=\"" + f2(kTop) + "\" width=\"" + f2(kPlotW) + "\" height=\"" +
            f2(kPlotH) + "\" fill=\"none\" stroke=\"black\"/>\n";
    if (x_ticks) {
      const double step = nice_step(x_.hi - x_.lo);
      for (double t = std::ceil(x_.lo / step) * step; t <= x_.hi + step * 1e-9; t += step) {
        out_ += "<line x1=\"" + f2(px(t)) + "\" y1=\"" + f2(kTop + kPlotH) + "\" x2=\"" + f2(px(t)) + "\" y2=\"" +
                f2(kTop + kPlotH + 4) + "\" stroke=\"black\"/>\n";
        out_ += text(px(t), kTop + kPlotH + 16, tick_label(t, step), "middle");
      }
    }
    const double step = nice_step(y_.hi - y_.lo);
    for (double t = std::ceil(y_.lo / step) * step; t <= y_.hi + step * 1e-9; t += step) {
      out_ += "<line x1=\"" + f2(kLeft - 4) + "\" y1=\"" + f2(py(t)) + "\" x2=\"" + f2(kLeft) + "\" y2=\"" +
              f2(py(t)) + "\" stroke=\"black\"/>\n";
      out_ += text(kLeft - 6, py(t) + 4, tick_label(t, step), "end");
    }
    out_ += text(kLeft + kPlotW / 2, kHeight - 12, x_label, "middle");
    out_ += "<text transform=\"translate(16 " + f2(kTop + kPlotH / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
            escape(y_label) + "</text>\n";
  }

  static std::string text(double x, double y, const std::string& s, const char* anchor) {
    return "<text x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }

  void raw(const std::string& s) { out_ += s; }
  std::string finish() { return out_ + "</svg>\n"; }

 private:
  std::string out_;
  Range x_, y_;
};

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// Five-stop approximation of viridis.
std::string color_scale(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
  }};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(t));
  const double f = t - static_cast<double>(i);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "#";
  for (std::size_t c = 0; c < 3; ++c) {
    const int v = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    out += kHex[v >> 4];
    out += kHex[v & 15];
  }
  return out;
}

}  // namespace

std::string color(std::size_t index) { return kPalette[index % kPalette.size()]; }

std::string render(const LineChart& chart, const RunInfo& run) {
  Canvas c(run, chart.title);
  Range x, y;
  for (const auto& b : chart.bands) {
    for (double v : b.x) x.add(v);
    for (double v : b.low) y.add(v);
    for (double v : b.high) y.add(v);
  }
  for (const auto* group : {&chart.lines, &chart.points}) {
    for (const auto& s : *group) {
      for (double v : s.x) x.add(v);
      for (double v : s.y) y.add(v);
    }
  }
  x.finish();
  y.finish();
  c.set_ranges(x, y);
  for (const auto& b : chart.bands) {
    std::string pts;
    for (std::size_t i = 0; i < b.x.size(); ++i) pts += f2(c.px(b.x[i])) + "," + f2(c.py(b.high[i])) + " ";
    for (std::size_t i = b.x.size(); i-- > 0;) pts += f2(c.px(b.x[i])) + "," + f2(c.py(b.low[i])) + " ";
    c.raw("<polygon points=\"" + pts + "\" fill=\"" + b.color + "\" fill-opacity=\"0.6\" stroke=\"none\"/>\n");
  }
  for (const auto& s : chart.lines) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.y[i])) pts += f2(c.px(s.x[i])) + "," + f2(c.py(s.y[i])) + " ";
    }
    c.raw("<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1\"/>\n");
  }
  for (const auto& s : chart.points) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      c.raw("<circle cx=\"" + f2(c.px(s.x[i])) + "\" cy=\"" + f2(c.py(s.y[i])) + "\" r=\"3\" fill=\"" + s.color +
            "\"/>\n");
    }
  }
  double ly = kTop + 14;
  for (const auto* group : {&chart.lines, &chart.points}) {
    for (const auto& s : *group) {
      if (s.label.empty()) continue;
      c.raw("<rect x=\"" + f2(kLeft + 8) + "\" y=\"" + f2(ly - 8) + "\" width=\"10\" height=\"3\" fill=\"" + s.color +
            "\"/>\n");
      c.raw(Canvas::text(kLeft + 22, ly - 4, s.label, "start"));
      ly += 14;
    }
  }
  c.axes(chart.x_label, chart.y_label);
  return c.finish();
}

std::string render_boxplot(const std::string& title, const std::string& y_label, const std::vector<BoxItem>& items,
                           const RunInfo& run) {
  Canvas c(run, title);
  Range x, y;
  x.lo = 0;
  x.hi = static_cast<double>(items.size()) + 1;
  for (const auto& b : items) {
    y.add(b.min);
    y.add(b.max);
    y.add(b.empirical);
  }
  y.finish();
  const double pad = 0.05 * (y.hi - y.lo);
  y.lo -= pad;
  y.hi += pad;
  c.set_ranges(x, y);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& b = items[i];
    const double cx = c.px(static_cast<double>(i) + 1);
    const double half = std::min(20.0, kPlotW / static_cast<double>(items.size() + 1) / 3);
    c.raw("<line x1=\"" + f2(cx) + "\" y1=\"" + f2(c.py(b.min)) + "\" x2=\"" + f2(cx) + "\" y2=\"" +
          f2(c.py(b.max)) + "\" stroke=\"black\"/>\n");
    c.raw("<rect x=\"" + f2(cx - half) + "\" y=\"" + f2(c.py(b.high)) + "\" width=\"" + f2(2 * half) +
          "\" height=\"" + f2(c.py(b.low) - c.py(b.high)) + "\" fill=\"#dddddd\" stroke=\"black\"/>\n");
    c.raw("<line x1=\"" + f2(cx - half) + "\" y1=\"" + f2(c.py(b.median)) + "\" x2=\"" + f2(cx + half) +
          "\" y2=\"" + f2(c.py(b.median)) + "\" stroke=\"black\"/>\n");
    c.raw("<circle cx=\"" + f2(cx) + "\" cy=\"" + f2(c.py(b.empirical)) + "\" r=\"4\" fill=\"#1f77b4\"/>\n");
    c.raw(Canvas::text(cx, kTop + kPlotH + 16, b.label, "middle"));
  }
  c.axes("", y_label, false);
  return c.finish();
}

std::string render(const Heatmap& map, const RunInfo& run) {
  Canvas c(run, map.title);
  Range x, y;
  x.lo = map.x0, x.hi = map.x1;
  y.lo = map.y0, y.hi = map.y1;
  c.set_ranges(x, y);
  Range v;
  for (double value : map.values) {
    if (map.log_scale) {
      if (value > 0) v.add(std::log10(value));
    } else {
      v.add(value);
    }
  }
  v.finish();
  const double cw = kPlotW / static_cast<double>(std::max<std::size_t>(1, map.cols));
  const double ch = kPlotH / static_cast<double>(std::max<std::size_t>(1, map.rows));
  for (std::size_t r = 0; r < map.rows; ++r) {
    for (std::size_t col = 0; col < map.cols; ++col) {
      double value = map.values[r * map.cols + col];
      if (!std::isfinite(value)) continue;
      if (map.log_scale) {
        if (value <= 0) continue;
        value = std::log10(value);
      }
      const double t = (value - v.lo) / (v.hi - v.lo);
      c.raw("<rect x=\"" + f2(kLeft + static_cast<double>(col) * cw) + "\" y=\"" +
            f2(kTop + kPlotH - static_cast<double>(r + 1) * ch) + "\" width=\"" + f2(cw + 0.05) + "\" height=\"" +
            f2(ch + 0.05) + "\" fill=\"" + color_scale(t) + "\"/>\n");
    }
  }
  for (std::size_t r = 0; r < map.row_labels.size(); ++r) {
    c.raw(Canvas::text(kLeft - 4, kTop + kPlotH - (static_cast<double>(r) + 0.5) * ch + 4, map.row_labels[r], "end"));
  }
  for (std::size_t col = 0; col < map.col_labels.size(); ++col) {
    c.raw(Canvas::text(kLeft + (static_cast<double>(col) + 0.5) * cw, kTop + kPlotH + 16, map.col_labels[col],
                       "middle"));
  }
  if (map.row_labels.empty() && map.col_labels.empty()) {
    c.axes(map.x_label, map.y_label);
  } else {
    c.raw(Canvas::text(kLeft + kPlotW / 2, kHeight - 12, map.x_label, "middle"));
  }
  c.raw(Canvas::text(kWidth - kRight, kTop - 6,
                     (map.log_scale ? "log10 scale " : "scale ") + num(v.lo) + " .. " + num(v.hi), "end"));
  return c.finish();
}

}  // namespace heaping::cli::svg
