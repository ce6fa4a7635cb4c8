#include <dpg/harness/svg.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dpg::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) { lo = 0.0; hi = 1.0; }
    if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
  }
};

class Canvas {
 public:
  Canvas(double w, double h) : w_(w), h_(h) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
         << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor = "middle", double rotate = 0.0,
            int size = 12) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
         << "\" font-size=\"" << size << "\"";
    if (rotate != 0.0) out_ << " transform=\"rotate(" << num(rotate) << ' ' << num(x) << ' ' << num(y) << ")\"";
    out_ << ">" << escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& color, double width = 1.0,
            bool dashed = false) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\""
         << num(y2) << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"";
    if (dashed) out_ << " stroke-dasharray=\"5,4\"";
    out_ << "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill, double opacity = 1.0,
            const std::string& stroke = "none") {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(std::max(w, 0.0))
         << "\" height=\"" << num(std::max(h, 0.0)) << "\" fill=\"" << fill << "\" fill-opacity=\""
         << num(opacity) << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    if (pts.empty()) return;
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) out_ << num(x) << ',' << num(y) << ' ';
    out_ << "\"/>\n";
  }
  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    if (pts.empty()) return;
    out_ << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const auto& [x, y] : pts) out_ << num(x) << ',' << num(y) << ' ';
    out_ << "\"/>\n";
  }
  void raw(const std::string& s) { out_ << s; }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }
  double width() const { return w_; }
  double height() const { return h_; }

 private:
  double w_;
  double h_;
  std::ostringstream out_;
};

struct Frame {
  double x0, y0, w, h;  // plot area in pixels
  Range xr, yr;
  bool log_x = false;

  double px(double x) const {
    const double lo = log_x ? std::log10(xr.lo) : xr.lo;
    const double hi = log_x ? std::log10(xr.hi) : xr.hi;
    const double v = log_x ? std::log10(x) : x;
    return x0 + (v - lo) / (hi - lo) * w;
  }
  double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

void draw_axes(Canvas& c, const Frame& f, const std::string& title, const std::string& xl,
               const std::string& yl) {
  c.text(f.x0 + f.w / 2, kTop - 15, title, "middle", 0.0, 14);
  c.line(f.x0, f.y0 + f.h, f.x0 + f.w, f.y0 + f.h, "black");
  c.line(f.x0, f.y0, f.x0, f.y0 + f.h, "black");
  for (int i = 0; i <= 4; ++i) {
    double xv;
    if (f.log_x) {
      xv = std::pow(10.0, std::log10(f.xr.lo) + (std::log10(f.xr.hi) - std::log10(f.xr.lo)) * i / 4.0);
    } else {
      xv = f.xr.lo + (f.xr.hi - f.xr.lo) * i / 4.0;
    }
    const double yv = f.yr.lo + (f.yr.hi - f.yr.lo) * i / 4.0;
    c.line(f.px(xv), f.y0 + f.h, f.px(xv), f.y0 + f.h + 4, "black");
    c.text(f.px(xv), f.y0 + f.h + 17, tick(xv));
    c.line(f.x0 - 4, f.py(yv), f.x0, f.py(yv), "black");
    c.text(f.x0 - 6, f.py(yv) + 4, tick(yv), "end");
  }
  c.text(f.x0 + f.w / 2, f.y0 + f.h + 40, xl);
  c.text(18, f.y0 + f.h / 2, yl, "middle", -90.0);
}

}  // namespace

std::string render(const LineChart& chart) {
  Canvas c(kWidth, kHeight);
  Frame f{kLeft, kTop, kWidth - kLeft - kRight - 120, kHeight - kTop - kBottom, {}, {}, chart.log_x};
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!chart.log_x || s.x[i] > 0) f.xr.add(s.x[i]);
      if (i < s.y.size()) f.yr.add(s.y[i]);
      if (i < s.low.size()) f.yr.add(s.low[i]);
      if (i < s.high.size()) f.yr.add(s.high[i]);
    }
  }
  for (const auto& m : chart.vertical) f.xr.add(m.value);
  for (const auto& m : chart.horizontal) f.yr.add(m.value);
  f.xr.finish();
  f.yr.finish();
  if (chart.log_x && f.xr.lo <= 0) f.log_x = false;
  draw_axes(c, f, chart.title, chart.x_label, chart.y_label);
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const std::string color = kPalette[k % std::size(kPalette)];
    if (s.low.size() == s.y.size() && s.high.size() == s.y.size() && !s.y.empty()) {
      std::vector<std::pair<double, double>> band;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (std::isfinite(s.high[i])) band.emplace_back(f.px(s.x[i]), f.py(s.high[i]));
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        if (std::isfinite(s.low[i])) band.emplace_back(f.px(s.x[i]), f.py(s.low[i]));
      }
      c.polygon(band, color);
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.y[i])) pts.emplace_back(f.px(s.x[i]), f.py(s.y[i]));
    }
    c.polyline(pts, color);
    c.line(f.x0 + f.w + 15, kTop + 18 * static_cast<double>(k) + 5, f.x0 + f.w + 35,
           kTop + 18 * static_cast<double>(k) + 5, color, 2.0);
    c.text(f.x0 + f.w + 40, kTop + 18 * static_cast<double>(k) + 9, s.name, "start");
  }
  for (const auto& m : chart.vertical) {
    c.line(f.px(m.value), f.y0, f.px(m.value), f.y0 + f.h, "#555555", 1.0, true);
    c.text(f.px(m.value) + 3, f.y0 + 12, m.label, "start");
  }
  for (const auto& m : chart.horizontal) {
    c.line(f.x0, f.py(m.value), f.x0 + f.w, f.py(m.value), "#555555", 1.0, true);
    c.text(f.x0 + f.w - 3, f.py(m.value) - 4, m.label, "end");
  }
  return c.finish();
}

std::string render(const Heatmap& map) {
  Canvas c(kWidth, kHeight);
  Frame f{kLeft, kTop, kWidth - kLeft - kRight - 90, kHeight - kTop - kBottom, {}, {}, false};
  for (double v : map.x) f.xr.add(v);
  for (double v : map.y) f.yr.add(v);
  f.xr.finish();
  f.yr.finish();
  Range vr;
  for (double v : map.values) vr.add(v);
  vr.finish();
  const std::size_t nx = map.x.size();
  const std::size_t ny = map.y.size();
  const double cw = nx > 1 ? f.w / static_cast<double>(nx - 1) : f.w;
  const double ch = ny > 1 ? f.h / static_cast<double>(ny - 1) : f.h;
  auto color = [&](double v) {
    if (!std::isfinite(v)) return std::string("#000000");
    const double t = (v - vr.lo) / (vr.hi - vr.lo);
    const int r = static_cast<int>(255 * std::clamp(t, 0.0, 1.0));
    const int b = 255 - r;
    const int g = static_cast<int>(255 * (1.0 - std::abs(2 * t - 1)) * 0.6);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = map.values[i * ny + j];
      const bool flag = i * ny + j < map.flagged.size() && map.flagged[i * ny + j];
      c.rect(f.px(map.x[i]) - cw / 2, f.py(map.y[j]) - ch / 2, cw, ch, color(v), 1.0,
             flag ? "black" : "none");
    }
  }
  draw_axes(c, f, map.title, map.x_label, map.y_label);
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    c.rect(f.x0 + f.w + 30, f.y0 + f.h - (k + 1) * f.h / 11.0, 20, f.h / 11.0,
           color(vr.lo + t * (vr.hi - vr.lo)));
  }
  c.text(f.x0 + f.w + 55, f.y0 + f.h, tick(vr.lo), "start");
  c.text(f.x0 + f.w + 55, f.y0 + 10, tick(vr.hi), "start");
  return c.finish();
}

namespace {

void draw_histogram(Canvas& c, const Histogram& hist, double x0, double y0, double w, double h) {
  Range r;
  for (const auto& [name, vals] : hist.groups) for (double v : vals) r.add(v);
  r.finish();
  const int bins = std::max(hist.bins, 1);
  std::vector<std::vector<int>> counts(hist.groups.size(), std::vector<int>(static_cast<std::size_t>(bins), 0));
  int max_count = 1;
  for (std::size_t g = 0; g < hist.groups.size(); ++g) {
    for (double v : hist.groups[g].second) {
      if (!std::isfinite(v)) continue;
      int b = static_cast<int>((v - r.lo) / (r.hi - r.lo) * bins);
      b = std::clamp(b, 0, bins - 1);
      max_count = std::max(max_count, ++counts[g][static_cast<std::size_t>(b)]);
    }
  }
  Frame f{x0, y0, w, h, r, {}, false};
  f.yr.lo = 0.0;
  f.yr.hi = static_cast<double>(max_count);
  draw_axes(c, f, hist.title, hist.x_label, "count");
  const double bw = w / bins;
  for (std::size_t g = 0; g < hist.groups.size(); ++g) {
    const std::string color = kPalette[g % std::size(kPalette)];
    for (int b = 0; b < bins; ++b) {
      const int n = counts[g][static_cast<std::size_t>(b)];
      c.rect(x0 + b * bw, f.py(n), bw, y0 + h - f.py(n), color, 0.45, color);
    }
    c.rect(x0 + w - 90, y0 + 6 + 16 * static_cast<double>(g), 10, 10, color, 0.45);
    c.text(x0 + w - 76, y0 + 15 + 16 * static_cast<double>(g), hist.groups[g].first, "start");
  }
}

}  // namespace

std::string render(const Histogram& hist) {
  Canvas c(kWidth, kHeight);
  draw_histogram(c, hist, kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  return c.finish();
}

std::string render_panels(const std::vector<Histogram>& panels, const std::string& title) {
  const double panel_w = 360.0;
  const double panel_h = 300.0;
  Canvas c(panel_w * static_cast<double>(std::max<std::size_t>(panels.size(), 1)), panel_h + 40);
  c.text(c.width() / 2, 18, title, "middle", 0.0, 14);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    draw_histogram(c, panels[i], panel_w * static_cast<double>(i) + 60, 70, panel_w - 80, panel_h - 110);
  }
  return c.finish();
}

std::string render(const BarChart& chart) {
  Canvas c(kWidth, kHeight);
  Frame f{kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom, {}, {}, false};
  f.xr.lo = 0.0;
  f.xr.hi = static_cast<double>(std::max<std::size_t>(chart.labels.size(), 1));
  f.yr.add(0.0);
  for (const auto& g : chart.values) for (double v : g) f.yr.add(v);
  f.yr.finish();
  c.text(f.x0 + f.w / 2, kTop - 15, chart.title, "middle", 0.0, 14);
  c.line(f.x0, f.y0 + f.h, f.x0 + f.w, f.y0 + f.h, "black");
  c.line(f.x0, f.y0, f.x0, f.y0 + f.h, "black");
  for (int i = 0; i <= 4; ++i) {
    const double yv = f.yr.lo + (f.yr.hi - f.yr.lo) * i / 4.0;
    c.text(f.x0 - 6, f.py(yv) + 4, tick(yv), "end");
  }
  c.text(18, f.y0 + f.h / 2, chart.y_label, "middle", -90.0);
  const std::size_t ng = std::max<std::size_t>(chart.values.size(), 1);
  const double slot = f.w / f.xr.hi;
  const double bw = slot * 0.8 / static_cast<double>(ng);
  for (std::size_t l = 0; l < chart.labels.size(); ++l) {
    c.text(f.x0 + slot * (static_cast<double>(l) + 0.5), f.y0 + f.h + 17, chart.labels[l]);
    for (std::size_t g = 0; g < chart.values.size(); ++g) {
      if (l >= chart.values[g].size() || !std::isfinite(chart.values[g][l])) continue;
      const double v = chart.values[g][l];
      const double top = f.py(std::max(v, 0.0));
      const double bottom = f.py(std::min(v, 0.0));
      c.rect(f.x0 + slot * static_cast<double>(l) + slot * 0.1 + bw * static_cast<double>(g), top, bw,
             bottom - top, kPalette[g % std::size(kPalette)]);
    }
  }
  for (std::size_t g = 0; g < chart.group_names.size(); ++g) {
    c.rect(f.x0 + f.w - 120, f.y0 + 16 * static_cast<double>(g), 10, 10, kPalette[g % std::size(kPalette)]);
    c.text(f.x0 + f.w - 105, f.y0 + 9 + 16 * static_cast<double>(g), chart.group_names[g], "start");
  }
  return c.finish();
}

}  // namespace dpg::svg
