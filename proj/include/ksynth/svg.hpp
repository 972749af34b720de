#pragma once

#include <string>
#include <vector>

#include "ksynth/types.hpp"

namespace ksynth {

/// Minimal static SVG line/scatter plotter; no external plotting dependency.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void set_log_x(bool on) { log_x_ = on; }
  void set_log_y(bool on) { log_y_ = on; }

  void add_line(const std::string& name, std::vector<std::pair<Real, Real>> points);
  void add_scatter(const std::string& name, std::vector<std::pair<Real, Real>> points);
  /// Unit cell centered on (x, y) shaded by value (used for heat maps).
  void add_cell(Real x, Real y, Real value);
  void add_vline(Real x, const std::string& label);

  std::string render() const;

 private:
  struct Series {
    std::string name;
    std::vector<std::pair<Real, Real>> points;
    bool line = true;
  };

  std::string title_, x_label_, y_label_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
  std::vector<std::tuple<Real, Real, Real>> cells_;
  std::vector<std::pair<Real, std::string>> vlines_;
};

}  // namespace ksynth
