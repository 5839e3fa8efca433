#pragma once

#include <optional>
#include <vector>

#include "pfno/allen_cahn.hpp"
#include "pfno/metrics/level_set.hpp"

namespace pfno {

enum class TipDirection { plus_x, minus_x, plus_y, minus_y };

struct TipRecord {
  double time = 0.0;
  Point position{0.0, 0.0};
  double distance = 0.0;  // from the grain center along the axis
  double velocity = 0.0;  // NaN where the centered window does not fit
  double rho = 0.0;       // NaN when the fit fails
  double peclet = 0.0;
  bool boundary = false;  // the solid reaches half the domain along the axis
};

struct TipOptions {
  Point center{-1.0, -1.0};  // negative: domain center
  double diffusivity = 6.25e-5;
  double window = 0.0;  // initial radius-fit window; 0 means 12 grid cells
  bool fit_radius = true;
};

// Distance from the center to the farthest zero crossing along the axis, or
// nullopt when the center is not solid.
std::optional<double> tip_distance(const Field2D& phi, TipDirection dir, Point center, bool* boundary = nullptr);

std::vector<TipRecord> tip_track(const std::vector<Field2D>& phis, const std::vector<double>& times,
                                 TipDirection dir, const TipOptions& opt = {});

// Parabola s = s0 - t^2/(2 rho) in tip-aligned coordinates, fitted over the
// contour piece through the tip with |t| <= window/2, then refitted once with
// window min(window, 6 rho).
std::optional<double> tip_radius(const LevelSetContour& contour, Point tip, TipDirection dir, double window);

struct SteadyTip {
  double velocity = 0.0;
  double rho = 0.0;
  double peclet = 0.0;
  int samples = 0;
};

// Mean of `count` records centred on the record nearest to `time`.
SteadyTip steady_state(const std::vector<TipRecord>& records, double time, int count = 20);

}  // namespace pfno
