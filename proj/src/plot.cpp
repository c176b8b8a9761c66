#include "cnt/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cnt/error.hpp"

namespace cnt {
namespace plot {
namespace {

constexpr const char* kPalette[] = {"#d95f02", "#1b9e77", "#7570b3", "#e7298a",
                                    "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double px_lo, double px_hi) const {
    double t;
    if (log) {
      t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    return px_lo + t * (px_hi - px_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) out.push_back(v);
      }
      if (out.size() < 2) {
        out = {lo, hi};
      }
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + step * 1e-9; v += step) out.push_back(v);
    return out;
  }
};

Axis fit_axis(const std::vector<const std::vector<double>*>& arrays, bool log) {
  Axis ax;
  ax.log = log;
  double lo = 1e300, hi = -1e300;
  for (const auto* a : arrays) {
    for (double v : *a) {
      if (log && v <= 0.0) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) {
    lo = log ? 0.1 : 0.0;
    hi = 1.0;
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
    if (log) {
      lo = hi / 10.0;
    }
  }
  if (!log) {
    const double margin = (hi - lo) * 0.05;
    ax.lo = lo - margin;
    ax.hi = hi + margin;
  } else {
    ax.lo = lo / 1.3;
    ax.hi = hi * 1.3;
  }
  return ax;
}

// Blue -> white -> red diverging map is overkill here; use a compact
// dark-to-bright sequential ramp.
std::string colormap(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double stops[5][3] = {{68, 1, 84},    {59, 82, 139},  {33, 145, 140},
                              {94, 201, 98},  {253, 231, 37}};
  const double pos = t * 4.0;
  const int i = std::min(3, static_cast<int>(pos));
  const double f = pos - i;
  const int r = static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]));
  const int g = static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]));
  const int b = static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]));
  std::ostringstream ss;
  ss << "rgb(" << r << ',' << g << ',' << b << ')';
  return ss.str();
}

class SvgDoc {
public:
  SvgDoc(int w, int h) : w_(w), h_(h) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
          << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    body_ << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color,
            double width = 1.0) {
    body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
          << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color << "\" stroke-width=\""
          << fmt(width) << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double width = 1.5, const std::string& dash = "") {
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << fmt(width) << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << " points=\"";
    for (const auto& [x, y] : pts) body_ << fmt(x) << ',' << fmt(y) << ' ';
    body_ << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& color) {
    body_ << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r)
          << "\" fill=\"" << color << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 12,
            const std::string& anchor = "start", double rotate = 0.0) {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size
          << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\"";
    if (rotate != 0.0)
      body_ << " transform=\"rotate(" << fmt(rotate) << ' ' << fmt(x) << ' ' << fmt(y)
            << ")\"";
    body_ << '>' << s << "</text>\n";
  }

  void save(const std::string& path) {
    body_ << "</svg>\n";
    std::ofstream out(path);
    if (!out) throw IoError("plot: cannot open " + path);
    out << body_.str();
    if (!out) throw IoError("plot: write failed for " + path);
  }

private:
  int w_, h_;
  std::ostringstream body_;
};

void draw_frame(SvgDoc& doc, double x0, double y0, double x1, double y1,
                const Axis& ax, const Axis& ay, const std::string& xlabel,
                const std::string& ylabel, const std::string& title) {
  doc.line(x0, y1, x1, y1, "#333");
  doc.line(x0, y0, x0, y1, "#333");
  for (double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    doc.line(px, y1, px, y1 + 4, "#333");
    doc.text(px, y1 + 16, fmt(t), 10, "middle");
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, y1, y0);
    if (py < y0 - 0.5 || py > y1 + 0.5) continue;
    doc.line(x0 - 4, py, x0, py, "#333");
    doc.text(x0 - 6, py + 3, fmt(t), 10, "end");
    doc.line(x0, py, x1, py, "#eee");
  }
  doc.text((x0 + x1) / 2, y1 + 32, xlabel, 12, "middle");
  doc.text(16, (y0 + y1) / 2, ylabel, 12, "middle", -90);
  doc.text((x0 + x1) / 2, y0 - 8, title, 14, "middle");
}

}  // namespace

void line_chart(const std::string& path, const std::string& title,
                const std::string& xlabel, const std::string& ylabel,
                const std::vector<Series>& series, bool log_x, bool log_y) {
  const int W = 640, H = 420;
  const double x0 = 60, y0 = 30, x1 = W - 20, y1 = H - 50;

  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Axis ax = fit_axis(xs, log_x);
  const Axis ay = fit_axis(ys, log_y);

  SvgDoc doc(W, H);
  draw_frame(doc, x0, y0, x1, y1, ax, ay, xlabel, ylabel, title);

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const std::string color = kPalette[si % 8];
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if ((log_x && s.x[i] <= 0) || (log_y && s.y[i] <= 0)) continue;
      pts.emplace_back(ax.map(s.x[i], x0, x1), ay.map(s.y[i], y1, y0));
    }
    if (s.line && pts.size() > 1) doc.polyline(pts, color);
    if (s.markers || !s.line)
      for (const auto& [px, py] : pts) doc.circle(px, py, 3.0, color);
    doc.circle(x1 - 130, y0 + 14 + 16 * si, 4, color);
    doc.text(x1 - 120, y0 + 18 + 16 * si, s.name, 11);
  }
  doc.save(path);
}

namespace {

void draw_heatmap_panel(SvgDoc& doc, double x0, double y0, double cell_w, double cell_h,
                        const std::vector<int>& col_labels, const std::vector<int>& row_labels,
                        const std::vector<std::vector<double>>& values,
                        const std::string& title) {
  double lo = 1e300, hi = -1e300;
  for (const auto& row : values)
    for (double v : row) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (lo > hi) {
    lo = 0;
    hi = 1;
  }
  const double span = hi > lo ? hi - lo : 1.0;

  for (size_t r = 0; r < values.size(); ++r) {
    for (size_t c = 0; c < values[r].size(); ++c) {
      const double v = values[r][c];
      const std::string fill =
          std::isfinite(v) ? colormap((v - lo) / span) : std::string("#ddd");
      doc.rect(x0 + c * cell_w, y0 + r * cell_h, cell_w + 0.5, cell_h + 0.5, fill);
    }
  }
  const double w = col_labels.size() * cell_w;
  const double h = row_labels.size() * cell_h;
  doc.text(x0 + w / 2, y0 - 8, title, 13, "middle");
  const size_t cstride = std::max<size_t>(1, col_labels.size() / 9);
  for (size_t c = 0; c < col_labels.size(); c += cstride)
    doc.text(x0 + (c + 0.5) * cell_w, y0 + h + 14, std::to_string(col_labels[c]), 10,
             "middle");
  for (size_t r = 0; r < row_labels.size(); ++r)
    doc.text(x0 - 6, y0 + (r + 0.7) * cell_h, std::to_string(row_labels[r]), 10, "end");

  // color bar
  const double bx = x0 + w + 14;
  for (int i = 0; i < 64; ++i) {
    const double t = 1.0 - i / 63.0;
    doc.rect(bx, y0 + i * h / 64.0, 10, h / 64.0 + 0.5, colormap(t));
  }
  doc.text(bx + 14, y0 + 10, fmt(hi), 9);
  doc.text(bx + 14, y0 + h, fmt(lo), 9);
}

}  // namespace

void heatmap(const std::string& path, const std::string& title,
             const std::string& xlabel, const std::string& ylabel,
             const std::vector<int>& col_labels, const std::vector<int>& row_labels,
             const std::vector<std::vector<double>>& values) {
  const double cell_w = std::max(8.0, 400.0 / col_labels.size());
  const double cell_h = std::max(12.0, 240.0 / row_labels.size());
  const int W = static_cast<int>(80 + col_labels.size() * cell_w + 80);
  const int H = static_cast<int>(70 + row_labels.size() * cell_h + 50);
  SvgDoc doc(W, H);
  draw_heatmap_panel(doc, 50, 40, cell_w, cell_h, col_labels, row_labels, values, title);
  doc.text(50 + col_labels.size() * cell_w / 2, H - 12, xlabel, 12, "middle");
  doc.text(14, 40 + row_labels.size() * cell_h / 2, ylabel, 12, "middle", -90);
  doc.save(path);
}

void heatmap_pair(const std::string& path, const std::string& title_a,
                  const std::string& title_b, const std::string& xlabel,
                  const std::string& ylabel, const std::vector<int>& col_labels,
                  const std::vector<int>& row_labels,
                  const std::vector<std::vector<double>>& values_a,
                  const std::vector<std::vector<double>>& values_b) {
  const double cell_w = std::max(6.0, 340.0 / col_labels.size());
  const double cell_h = std::max(12.0, 220.0 / row_labels.size());
  const double panel_w = col_labels.size() * cell_w + 110;
  const int W = static_cast<int>(60 + 2 * panel_w);
  const int H = static_cast<int>(70 + row_labels.size() * cell_h + 50);
  SvgDoc doc(W, H);
  draw_heatmap_panel(doc, 50, 40, cell_w, cell_h, col_labels, row_labels, values_a,
                     title_a);
  draw_heatmap_panel(doc, 50 + panel_w, 40, cell_w, cell_h, col_labels, row_labels,
                     values_b, title_b);
  doc.text(50 + panel_w, H - 12, xlabel, 12, "middle");
  doc.text(14, 40 + row_labels.size() * cell_h / 2, ylabel, 12, "middle", -90);
  doc.save(path);
}

}  // namespace plot
}  // namespace cnt
