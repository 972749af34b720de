#include "ksynth/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <tuple>

namespace ksynth {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 130;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string heat_color(Real t) {
  // Two-segment blue -> yellow -> red ramp.
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const Real s = t / 0.5;
    r = static_cast<int>(35 + s * (250 - 35));
    g = static_cast<int>(80 + s * (220 - 80));
    b = static_cast<int>(170 - s * 120);
  } else {
    const Real s = (t - 0.5) / 0.5;
    r = 250;
    g = static_cast<int>(220 - s * 170);
    b = static_cast<int>(50 - s * 20);
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::vector<Real> linear_ticks(Real lo, Real hi) {
  if (!(hi > lo)) return {lo};
  const Real span = hi - lo;
  const Real raw = span / 5.0;
  const Real mag = std::pow(10.0, std::floor(std::log10(raw)));
  Real step = mag;
  for (const Real m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<Real> ticks;
  for (Real t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push_back(t);
  }
  return ticks;
}

std::vector<Real> log_ticks(Real lo, Real hi) {
  std::vector<Real> ticks;
  for (int e = static_cast<int>(std::floor(std::log10(lo)));
       e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
    const Real t = std::pow(10.0, e);
    if (t >= lo / 1.0001 && t <= hi * 1.0001) ticks.push_back(t);
  }
  if (ticks.empty()) ticks = {lo, hi};
  return ticks;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_line(const std::string& name, std::vector<std::pair<Real, Real>> points) {
  series_.push_back({name, std::move(points), true});
}

void SvgPlot::add_scatter(const std::string& name, std::vector<std::pair<Real, Real>> points) {
  series_.push_back({name, std::move(points), false});
}

void SvgPlot::add_cell(Real x, Real y, Real value) { cells_.emplace_back(x, y, value); }

void SvgPlot::add_vline(Real x, const std::string& label) { vlines_.emplace_back(x, label); }

std::string SvgPlot::render() const {
  Real xmin = std::numeric_limits<Real>::infinity(), xmax = -xmin;
  Real ymin = xmin, ymax = -xmin;
  auto fold = [&](Real x, Real y) {
    if (log_x_ && x <= 0.0) return;
    if (log_y_ && y <= 0.0) return;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& s : series_) {
    for (const auto& [x, y] : s.points) fold(x, y);
  }
  for (const auto& [x, y, v] : cells_) fold(x, y);
  for (const auto& [x, label] : vlines_) fold(x, log_y_ ? std::max(ymin, 1e-300) : ymin);
  if (!(xmax >= xmin)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (!(ymax >= ymin)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + (log_x_ ? xmin * 9 + 1 : 1.0);
  if (ymax == ymin) ymax = ymin + (log_y_ ? ymin * 9 + 1 : 1.0);
  if (!cells_.empty()) {
    // leave room for full cells at the edges
    xmin -= 0.5;
    xmax += 0.5;
    ymin -= 0.5;
    ymax += 0.5;
  }

  const Real plot_w = kWidth - kMarginLeft - kMarginRight;
  const Real plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](Real x) {
    const Real t = log_x_ ? (std::log10(x) - std::log10(xmin)) / (std::log10(xmax) - std::log10(xmin))
                          : (x - xmin) / (xmax - xmin);
    return kMarginLeft + t * plot_w;
  };
  auto sy = [&](Real y) {
    const Real t = log_y_ ? (std::log10(y) - std::log10(ymin)) / (std::log10(ymax) - std::log10(ymin))
                          : (y - ymin) / (ymax - ymin);
    return kMarginTop + (1.0 - t) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">"
      << title_ << "</text>\n";

  // axes box
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  const std::vector<Real> xticks = log_x_ ? log_ticks(xmin, xmax) : linear_ticks(xmin, xmax);
  const std::vector<Real> yticks = log_y_ ? log_ticks(ymin, ymax) : linear_ticks(ymin, ymax);
  for (const Real t : xticks) {
    const Real px = sx(t);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << num(px)
        << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(t)
        << "</text>\n";
  }
  for (const Real t : yticks) {
    const Real py = sy(t);
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << num(py) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(t)
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label_
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\""
      << "rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << y_label_ << "</text>\n";

  // heat cells under the data
  if (!cells_.empty()) {
    Real vmin = std::numeric_limits<Real>::infinity(), vmax = -vmin;
    for (const auto& [x, y, v] : cells_) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    const Real cw = plot_w / (xmax - xmin);
    const Real ch = plot_h / (ymax - ymin);
    for (const auto& [x, y, v] : cells_) {
      const Real t = vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.5;
      out << "<rect x=\"" << num(sx(x) - cw / 2) << "\" y=\"" << num(sy(y) - ch / 2)
          << "\" width=\"" << num(cw) << "\" height=\"" << num(ch) << "\" fill=\""
          << heat_color(t) << "\"/>\n";
    }
  }

  for (const auto& [x, label] : vlines_) {
    out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(sx(x))
        << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"#999\" stroke-dasharray=\"6,4\"/>\n";
    out << "<text x=\"" << num(sx(x) + 4) << "\" y=\"" << kMarginTop + 14
        << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#555\">" << label
        << "</text>\n";
  }

  int color_idx = 0;
  int legend_y = kMarginTop + 10;
  for (const auto& s : series_) {
    const std::string color = kPalette[color_idx % 8];
    ++color_idx;
    if (s.line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
      for (const auto& [x, y] : s.points) {
        if ((log_x_ && x <= 0) || (log_y_ && y <= 0)) continue;
        out << num(sx(x)) << ',' << num(sy(y)) << ' ';
      }
      out << "\"/>\n";
    }
    for (const auto& [x, y] : s.points) {
      if ((log_x_ && x <= 0) || (log_y_ && y <= 0)) continue;
      out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!s.name.empty()) {
      out << "<circle cx=\"" << kWidth - kMarginRight + 14 << "\" cy=\"" << legend_y
          << "\" r=\"4\" fill=\"" << color << "\"/>\n";
      out << "<text x=\"" << kWidth - kMarginRight + 24 << "\" y=\"" << legend_y + 4
          << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.name << "</text>\n";
      legend_y += 18;
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ksynth
