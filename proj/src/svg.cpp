#include "tarifflab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tarifflab::svg {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 26.0;
constexpr double kTop = 46.0;
constexpr double kBottom = 56.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

// Heckbert's tick spacing.
double nice_num(double x, bool round_to) {
  const double expv = std::floor(std::log10(x));
  const double f = x / std::pow(10.0, expv);
  double nf;
  if (round_to) {
    nf = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  } else {
    nf = f <= 1.0 ? 1.0 : f <= 2.0 ? 2.0 : f <= 5.0 ? 5.0 : 10.0;
  }
  return nf * std::pow(10.0, expv);
}

std::vector<double> linear_ticks(double lo, double hi) {
  if (!(hi > lo)) return {lo};
  const double step = nice_num(nice_num(hi - lo, false) / 4.0, true);
  std::vector<double> ticks;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double unit(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }
  std::vector<double> ticks() const {
    if (!log) return linear_ticks(lo, hi);
    std::vector<double> out;
    const int e_lo = static_cast<int>(std::floor(std::log10(lo)));
    const int e_hi = static_cast<int>(std::ceil(std::log10(hi)));
    for (int e = e_lo; e <= e_hi; ++e) {
      const double v = std::pow(10.0, e);
      if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
    }
    return out;
  }
};

double px_x(const Axis& ax, double v) { return kLeft + ax.unit(v) * kPlotW; }
double px_y(const Axis& ax, double v) { return kTop + kPlotH - ax.unit(v) * kPlotH; }

Axis padded_axis(double lo, double hi, bool log) {
  Axis ax;
  ax.log = log;
  if (log) {
    ax.lo = std::pow(10.0, std::floor(std::log10(lo)));
    ax.hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (ax.lo == ax.hi) ax.hi *= 10.0;
    return ax;
  }
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = (hi - lo) * 0.06;
  ax.lo = lo - pad;
  ax.hi = hi + pad;
  return ax;
}

class Canvas {
 public:
  Canvas() {
    out_ << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(kWidth) << "' height='"
         << fmt(kHeight) << "' viewBox='0 0 " << fmt(kWidth) << " " << fmt(kHeight) << "'>\n";
    out_ << "<rect x='0' y='0' width='" << fmt(kWidth) << "' height='" << fmt(kHeight)
         << "' fill='white'/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, bool dashed = false) {
    out_ << "<line x1='" << fmt(x1) << "' y1='" << fmt(y1) << "' x2='" << fmt(x2) << "' y2='"
         << fmt(y2) << "' stroke='" << stroke << "' stroke-width='" << fmt(width) << "'";
    if (dashed) out_ << " stroke-dasharray='6 4'";
    out_ << "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill) {
    out_ << "<circle cx='" << fmt(cx) << "' cy='" << fmt(cy) << "' r='" << fmt(r) << "' fill='"
         << fill << "' fill-opacity='0.85'/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            double opacity = 1.0) {
    out_ << "<rect x='" << fmt(x) << "' y='" << fmt(y) << "' width='" << fmt(w) << "' height='"
         << fmt(h) << "' fill='" << fill << "' fill-opacity='" << fmt(opacity) << "'/>\n";
  }

  void polygon(const std::vector<cluster::Point2>& px, const std::string& color) {
    out_ << "<polygon points='";
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (i) out_ << ' ';
      out_ << fmt(px[i].x) << ',' << fmt(px[i].y);
    }
    out_ << "' fill='" << color << "' fill-opacity='0.15' stroke='" << color
         << "' stroke-width='1.2'/>\n";
  }

  void polyline(const std::vector<cluster::Point2>& px, const std::string& color,
                double width) {
    out_ << "<polyline points='";
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (i) out_ << ' ';
      out_ << fmt(px[i].x) << ',' << fmt(px[i].y);
    }
    out_ << "' fill='none' stroke='" << color << "' stroke-width='" << fmt(width) << "'/>\n";
  }

  void text(double x, double y, const std::string& content, double size,
            const std::string& anchor = "start", const std::string& fill = "#333333",
            bool vertical = false) {
    out_ << "<text x='" << fmt(x) << "' y='" << fmt(y) << "' font-size='" << fmt(size)
         << "' font-family='sans-serif' text-anchor='" << anchor << "' fill='" << fill << "'";
    if (vertical) out_ << " transform='rotate(-90 " << fmt(x) << " " << fmt(y) << ")'";
    out_ << ">" << escape(content) << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

void draw_frame(Canvas& canvas, const std::string& title, const std::string& x_label,
                const std::string& y_label, const Axis& ax, const Axis& ay) {
  for (double t : ay.ticks()) {
    const double y = px_y(ay, t);
    canvas.line(kLeft, y, kLeft + kPlotW, y, "#e0e0e0", 0.8);
    canvas.text(kLeft - 8, y + 3.5, fmt(t), 11, "end", "#555555");
  }
  for (double t : ax.ticks()) {
    const double x = px_x(ax, t);
    canvas.line(x, kTop + kPlotH, x, kTop + kPlotH + 5, "#555555", 1.0);
    canvas.text(x, kTop + kPlotH + 18, fmt(t), 11, "middle", "#555555");
  }
  canvas.line(kLeft, kTop, kLeft, kTop + kPlotH, "#555555", 1.2);
  canvas.line(kLeft, kTop + kPlotH, kLeft + kPlotW, kTop + kPlotH, "#555555", 1.2);
  canvas.text(kWidth / 2, kTop - 18, title, 15, "middle", "#222222");
  canvas.text(kWidth / 2, kHeight - 14, x_label, 12, "middle");
  canvas.text(20, kTop + kPlotH / 2, y_label, 12, "middle", "#333333", true);
}

struct LegendEntry {
  std::string color;
  std::string label;
  bool dashed = false;
};

void draw_legend(Canvas& canvas, const std::vector<LegendEntry>& entries) {
  const double x = kLeft + kPlotW - 198;
  double y = kTop + 10;
  for (const auto& entry : entries) {
    if (entry.dashed) {
      canvas.line(x, y + 4, x + 18, y + 4, entry.color, 2.0, true);
    } else {
      canvas.rect(x, y, 18, 8, entry.color, 0.85);
    }
    canvas.text(x + 24, y + 8, entry.label, 11, "start", "#333333");
    y += 17;
  }
}

// Intersection of y = a + b x with the axis-aligned plot domain.
bool clip_guide(const GuideLine& g, const Axis& ax, const Axis& ay, cluster::Point2& p0,
                cluster::Point2& p1) {
  double x0 = ax.lo, x1 = ax.hi;
  auto y_at = [&](double x) { return g.intercept + g.slope * x; };
  std::vector<cluster::Point2> pts;
  auto consider = [&](double x, double y) {
    if (x >= ax.lo - 1e-9 && x <= ax.hi + 1e-9 && y >= ay.lo - 1e-9 && y <= ay.hi + 1e-9) {
      pts.push_back({x, y});
    }
  };
  consider(x0, y_at(x0));
  consider(x1, y_at(x1));
  if (g.slope != 0.0) {
    consider((ay.lo - g.intercept) / g.slope, ay.lo);
    consider((ay.hi - g.intercept) / g.slope, ay.hi);
  }
  if (pts.size() < 2) return false;
  auto [mn, mx] = std::minmax_element(pts.begin(), pts.end(),
                                      [](auto& a, auto& b) { return a.x < b.x; });
  if (mn->x == mx->x) return false;
  p0 = *mn;
  p1 = *mx;
  return true;
}

}  // namespace

std::string scatter_chart(const ScatterSpec& spec) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& p : spec.points) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  for (const auto& hull : spec.hulls) {
    for (const auto& v : hull.vertices) {
      x_lo = std::min(x_lo, v.x);
      x_hi = std::max(x_hi, v.x);
      y_lo = std::min(y_lo, v.y);
      y_hi = std::max(y_hi, v.y);
    }
  }
  if (spec.points.empty() && spec.hulls.empty()) {
    x_lo = y_lo = 0.0;
    x_hi = y_hi = 1.0;
  }
  const Axis ax = padded_axis(x_lo, x_hi, false);
  const Axis ay = padded_axis(y_lo, y_hi, spec.log_y);

  Canvas canvas;
  draw_frame(canvas, spec.title, spec.x_label, spec.y_label, ax, ay);

  std::vector<LegendEntry> legend;
  for (const auto& hull : spec.hulls) {
    std::vector<cluster::Point2> px;
    px.reserve(hull.vertices.size());
    for (const auto& v : hull.vertices) px.push_back({px_x(ax, v.x), px_y(ay, v.y)});
    if (px.size() >= 2) canvas.polygon(px, hull.color);
    if (!hull.label.empty()) legend.push_back({hull.color, hull.label, false});
  }
  for (const auto& g : spec.guides) {
    cluster::Point2 p0, p1;
    if (clip_guide(g, ax, ay, p0, p1)) {
      canvas.line(px_x(ax, p0.x), px_y(ay, p0.y), px_x(ax, p1.x), px_y(ay, p1.y), g.color, 1.6,
                  g.dashed);
    }
    if (!g.label.empty()) legend.push_back({g.color, g.label, true});
  }
  for (const auto& p : spec.points) {
    const double cx = px_x(ax, p.x);
    const double cy = px_y(ay, p.y);
    canvas.circle(cx, cy, p.radius, p.color);
    if (!p.label.empty()) canvas.text(cx + 6, cy - 6, p.label, 10, "start", "#444444");
  }
  if (!legend.empty()) draw_legend(canvas, legend);
  return canvas.finish();
}

std::string bar_chart(const BarSpec& spec) {
  double y_hi = 0.0;
  for (const auto& s : spec.series) {
    for (double v : s.values) y_hi = std::max(y_hi, v);
  }
  if (spec.reference_line) y_hi = std::max(y_hi, *spec.reference_line);
  if (y_hi == 0.0) y_hi = 1.0;
  Axis ay{0.0, y_hi * 1.12, false};
  Axis ax{0.0, 1.0, false};  // categorical; positions computed directly

  Canvas canvas;
  draw_frame(canvas, spec.title, "", spec.y_label, ax, ay);

  const std::size_t ncat = spec.categories.size();
  const std::size_t nser = std::max<std::size_t>(1, spec.series.size());
  const double slot = kPlotW / static_cast<double>(std::max<std::size_t>(1, ncat));
  const double group_w = slot * 0.68;
  const double bar_w = group_w / static_cast<double>(nser);
  const double base_y = px_y(ay, 0.0);

  for (std::size_t c = 0; c < ncat; ++c) {
    const double x_mid = kLeft + (static_cast<double>(c) + 0.5) * slot;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      const double v = spec.series[s].values[c];
      const double top = px_y(ay, v);
      const double x = x_mid - group_w / 2 + static_cast<double>(s) * bar_w;
      canvas.rect(x, top, bar_w - 1.5, base_y - top, spec.series[s].color, 0.9);
    }
    canvas.text(x_mid, kTop + kPlotH + 18, spec.categories[c], 10.5, "middle", "#444444");
  }

  if (spec.reference_line) {
    const double y = px_y(ay, *spec.reference_line);
    canvas.line(kLeft, y, kLeft + kPlotW, y, "#d62728", 1.6, true);
    if (!spec.reference_label.empty()) {
      canvas.text(kLeft + 6, y - 6, spec.reference_label, 11, "start", "#d62728");
    }
  }

  std::vector<LegendEntry> legend;
  for (const auto& s : spec.series) legend.push_back({s.color, s.name, false});
  if (legend.size() > 1) draw_legend(canvas, legend);
  return canvas.finish();
}

std::string line_chart(const LineSpec& spec) {
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  std::size_t nmax = 0;
  for (const auto& s : spec.series) {
    nmax = std::max(nmax, s.values.size());
    for (double v : s.values) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (nmax == 0) {
    y_lo = 0.0;
    y_hi = 1.0;
    nmax = 1;
  }
  const Axis ax = padded_axis(0.0, static_cast<double>(nmax - 1), false);
  const Axis ay = padded_axis(std::min(0.0, y_lo), y_hi, false);

  Canvas canvas;
  draw_frame(canvas, spec.title, spec.x_label, spec.y_label, ax, ay);

  std::vector<LegendEntry> legend;
  for (const auto& s : spec.series) {
    std::vector<cluster::Point2> px;
    px.reserve(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      px.push_back({px_x(ax, static_cast<double>(i)), px_y(ay, s.values[i])});
    }
    canvas.polyline(px, s.color, 1.8);
    legend.push_back({s.color, s.name, false});
  }
  draw_legend(canvas, legend);
  return canvas.finish();
}

}  // namespace tarifflab::svg
