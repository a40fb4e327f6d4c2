// Minimal standalone SVG 1.1 writer: line charts, banded heatmaps and
// stacked time-series panels.  Output is a pure function of the inputs.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "bgate/report/csv.hpp"

namespace bgate::report {

inline std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string xml_escape(std::string_view s) {
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

struct Rgb {
  int r, g, b;
  std::string hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
  }
};

/// Viridis-like ramp, t in [0, 1].
inline Rgb ramp(double t) {
  static constexpr std::array<std::array<int, 3>, 6> stops = {
      {{68, 1, 84}, {65, 68, 135}, {42, 120, 142}, {34, 168, 132}, {122, 209, 81}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * static_cast<double>(stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  auto lerp = [&](int c) { return static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c]))); };
  return {lerp(0), lerp(1), lerp(2)};
}

inline constexpr std::array<std::string_view, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

class SvgDocument {
 public:
  SvgDocument(int width, int height, const Provenance& provenance) : width_(width), height_(height) {
    body_ += "<metadata>\n";
    for (const auto& [k, v] : provenance) {
      body_ += "  <entry key=\"" + xml_escape(k) + "\">" + xml_escape(v) + "</entry>\n";
    }
    body_ += "</metadata>\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) +
             "\" fill=\"white\"/>\n";
  }

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = {}) {
    body_ += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(w) + "\" height=\"" + fixed(h) +
             "\" fill=\"" + std::string(fill) + "\"" + (extra.empty() ? "" : " " + std::string(extra)) + "/>\n";
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            std::string_view extra = {}) {
    body_ += "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) + "\" y2=\"" + fixed(y2) +
             "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + fixed(width) + "\"" +
             (extra.empty() ? "" : " " + std::string(extra)) + "/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke, double width = 1.5,
                std::string_view extra = {}) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + fixed(width) + "\"";
    if (!extra.empty()) body_ += " " + std::string(extra);
    body_ += " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += fixed(pts[i].first) + "," + fixed(pts[i].second);
    }
    body_ += "\"/>\n";
  }

  void text(double x, double y, std::string_view s, int size = 12, std::string_view anchor = "start",
            std::string_view extra = {}) {
    body_ += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" font-family=\"sans-serif\" font-size=\"" +
             std::to_string(size) + "\" text-anchor=\"" + std::string(anchor) + "\"" +
             (extra.empty() ? "" : " " + std::string(extra)) + ">" + xml_escape(s) + "</text>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " +
           std::to_string(width_) + " " + std::to_string(height_) + "\">\n" + body_ + "</svg>\n";
  }

 private:
  int width_;
  int height_;
  std::string body_;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Line chart; with log_y, nonpositive points are dropped.
inline std::string line_chart(const std::vector<Series>& series, std::string_view title, std::string_view x_label,
                              std::string_view y_label, bool log_y, const Provenance& provenance) {
  constexpr int W = 720, H = 480, L = 80, R = 180, T = 40, B = 60;
  SvgDocument doc(W, H, provenance);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (log_y) y0 = std::floor(y0), y1 = std::ceil(y1);
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return T + ph - (v - y0) / (y1 - y0) * ph; };

  doc.text(W / 2.0, 24, title, 15, "middle");
  doc.rect(L, T, pw, ph, "none", "stroke=\"black\"");
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    doc.line(px(xv), T + ph, px(xv), T + ph + 5, "black");
    doc.text(px(xv), T + ph + 20, fixed(xv, 2), 11, "middle");
  }
  if (log_y) {
    for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); ++e) {
      doc.line(L - 5, py(e), L + pw, py(e), "#cccccc", 0.5);
      doc.text(L - 8, py(e) + 4, "1e" + std::to_string(e), 11, "end");
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double yv = y0 + (y1 - y0) * i / 5.0;
      doc.line(L - 5, py(yv), L + pw, py(yv), "#cccccc", 0.5);
      doc.text(L - 8, py(yv) + 4, fixed(yv, 3), 11, "end");
    }
  }
  doc.text(L + pw / 2, H - 15, x_label, 13, "middle");
  doc.text(20, T + ph / 2, y_label, 13, "middle", "transform=\"rotate(-90 20 " + fixed(T + ph / 2) + ")\"");

  for (std::size_t s = 0; s < series.size(); ++s) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double y = series[s].y[i];
      if ((log_y && !(y > 0.0)) || !std::isfinite(y)) continue;
      pts.emplace_back(px(series[s].x[i]), py(ty(y)));
    }
    const auto color = kPalette[s % kPalette.size()];
    doc.polyline(pts, color, 2.0, series[s].dashed ? "stroke-dasharray=\"6,4\"" : "");
    const double ly = T + 16.0 * static_cast<double>(s) + 10;
    doc.line(L + pw + 10, ly, L + pw + 35, ly, color, 2.0, series[s].dashed ? "stroke-dasharray=\"6,4\"" : "");
    doc.text(L + pw + 40, ly + 4, series[s].name, 10);
  }
  return doc.str();
}

struct HeatmapSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;                    // column coordinates
  std::vector<double> y;                    // row coordinates
  std::vector<std::vector<double>> values;  // [row][col]
  double band_width_decades = 0.25;         // iso-band spacing in log10 units
  std::optional<double> highlight_level;    // outline cells on either side of this level
  bool diagonal = false;                    // draw x == y
};

/// Heatmap on a log10 color scale, quantized into iso-bands so that band
/// edges play the role of contour lines.  Nonpositive or non-finite cells are
/// drawn grey.
inline std::string heatmap(const HeatmapSpec& spec, const Provenance& provenance) {
  constexpr int W = 720, H = 560, L = 80, R = 140, T = 40, B = 70;
  SvgDocument doc(W, H, provenance);
  const std::size_t nr = spec.y.size(), nc = spec.x.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : spec.values) {
    for (double v : row) {
      if (v > 0.0 && std::isfinite(v)) lo = std::min(lo, std::log10(v)), hi = std::max(hi, std::log10(v));
    }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  const double bw = spec.band_width_decades;
  lo = std::floor(lo / bw) * bw;
  hi = std::max(lo + bw, std::ceil(hi / bw) * bw);
  const double pw = W - L - R, ph = H - T - B;
  const double cw = pw / static_cast<double>(nc), ch = ph / static_cast<double>(nr);
  auto band_color = [&](double v) -> std::string {
    if (!(v > 0.0) || !std::isfinite(v)) return "#bbbbbb";
    const double band = std::floor((std::log10(v) - lo) / bw);
    const double nb = std::round((hi - lo) / bw);
    return ramp(nb > 1 ? band / (nb - 1) : 0.0).hex();
  };

  doc.text(W / 2.0, 24, spec.title, 15, "middle");
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      // row 0 at the bottom
      const double x = L + cw * static_cast<double>(c);
      const double y = T + ph - ch * static_cast<double>(r + 1);
      doc.rect(x, y, cw, ch, band_color(spec.values[r][c]));
    }
  }
  if (spec.highlight_level) {
    const double level = *spec.highlight_level;
    auto above = [&](std::size_t r, std::size_t c) { return spec.values[r][c] > level; };
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t c = 0; c < nc; ++c) {
        const double x = L + cw * static_cast<double>(c);
        const double y = T + ph - ch * static_cast<double>(r + 1);
        if (c + 1 < nc && above(r, c) != above(r, c + 1)) doc.line(x + cw, y, x + cw, y + ch, "white", 3.0);
        if (r + 1 < nr && above(r, c) != above(r + 1, c)) doc.line(x, y, x + cw, y, "white", 3.0);
      }
    }
  }
  if (spec.diagonal && nc > 1 && nr > 1) {
    auto px = [&](double v) { return L + cw * (0.5 + (v - spec.x.front()) / (spec.x.back() - spec.x.front()) * (nc - 1)); };
    auto py = [&](double v) {
      return T + ph - ch * (0.5 + (v - spec.y.front()) / (spec.y.back() - spec.y.front()) * (nr - 1));
    };
    const double a = std::max(spec.x.front(), spec.y.front());
    const double b = std::min(spec.x.back(), spec.y.back());
    if (b > a) doc.line(px(a), py(a), px(b), py(b), "white", 1.5, "stroke-dasharray=\"6,4\"");
  }
  for (std::size_t c = 0; c < nc; ++c) {
    doc.text(L + cw * (static_cast<double>(c) + 0.5), T + ph + 18, fixed(spec.x[c], 2), 10, "middle");
  }
  for (std::size_t r = 0; r < nr; ++r) {
    doc.text(L - 6, T + ph - ch * (static_cast<double>(r) + 0.5) + 4, fixed(spec.y[r], 2), 10, "end");
  }
  doc.text(L + pw / 2, H - 25, spec.x_label, 13, "middle");
  doc.text(20, T + ph / 2, spec.y_label, 13, "middle", "transform=\"rotate(-90 20 " + fixed(T + ph / 2) + ")\"");

  // legend: one swatch per band
  const int nb = static_cast<int>(std::round((hi - lo) / bw));
  const double sh = std::min(24.0, ph / std::max(nb, 1));
  for (int b = 0; b < nb; ++b) {
    const double y = T + ph - sh * (b + 1);
    doc.rect(L + pw + 20, y, 20, sh, ramp(nb > 1 ? static_cast<double>(b) / (nb - 1) : 0.0).hex());
    doc.text(L + pw + 46, y + sh / 2 + 4, "1e" + fixed(lo + bw * b, 2), 10);
  }
  doc.text(L + pw + 20, T - 8, "log10 bands", 10);
  return doc.str();
}

struct Panel {
  std::string label;
  std::vector<Series> series;
  std::optional<std::pair<double, double>> y_range;
};

/// Vertically stacked panels sharing a time axis; `shade` marks the
/// intervals where the ideal output is 1.
inline std::string time_series_panels(const std::vector<double>& t, const std::vector<Panel>& panels,
                                      const std::vector<std::uint8_t>& shade, std::string_view title,
                                      const Provenance& provenance) {
  constexpr int W = 900, L = 70, R = 20, T = 40, B = 40, PH = 150, GAP = 20;
  const int H = T + B + static_cast<int>(panels.size()) * (PH + GAP);
  SvgDocument doc(W, H, provenance);
  doc.text(W / 2.0, 24, title, 15, "middle");
  if (t.empty()) return doc.str();
  const double t0 = t.front(), t1 = t.back() > t0 ? t.back() : t0 + 1;
  const double pw = W - L - R;
  auto px = [&](double v) { return L + (v - t0) / (t1 - t0) * pw; };
  // at most ~2 points per pixel column
  const std::size_t stride = std::max<std::size_t>(1, t.size() / (2 * static_cast<std::size_t>(pw)));

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double top = T + static_cast<double>(p) * (PH + GAP);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    if (panels[p].y_range) {
      std::tie(lo, hi) = *panels[p].y_range;
    } else {
      for (const auto& s : panels[p].series) {
        for (double v : s.y) lo = std::min(lo, v), hi = std::max(hi, v);
      }
      if (!(hi > lo)) hi = lo + 1;
    }
    auto py = [&](double v) { return top + PH - (std::clamp(v, lo, hi) - lo) / (hi - lo) * PH; };
    // shaded truth intervals
    for (std::size_t k = 0; k < shade.size();) {
      if (!shade[k]) {
        ++k;
        continue;
      }
      std::size_t e = k;
      while (e < shade.size() && shade[e]) ++e;
      doc.rect(px(t[k]), top, px(t[e - 1]) - px(t[k]) + 0.5, PH, "#fff2a8");
      k = e;
    }
    doc.rect(L, top, pw, PH, "none", "stroke=\"black\"");
    doc.text(L - 8, top + 12, fixed(hi, 2), 10, "end");
    doc.text(L - 8, top + PH, fixed(lo, 2), 10, "end");
    doc.text(L + 6, top + 14, panels[p].label, 12);
    for (std::size_t s = 0; s < panels[p].series.size(); ++s) {
      const auto& ser = panels[p].series[s];
      std::vector<std::pair<double, double>> pts;
      for (std::size_t k = 0; k < ser.y.size(); k += stride) pts.emplace_back(px(t[k]), py(ser.y[k]));
      doc.polyline(pts, kPalette[s % kPalette.size()], 1.0);
    }
  }
  const double bottom = T + static_cast<double>(panels.size()) * (PH + GAP) - GAP;
  for (int i = 0; i <= 5; ++i) {
    const double tv = t0 + (t1 - t0) * i / 5.0;
    doc.text(px(tv), bottom + 16, fixed(tv, 0), 10, "middle");
  }
  return doc.str();
}

}  // namespace bgate::report
