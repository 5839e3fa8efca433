#pragma once

#include <vector>

#include "pfno/field.hpp"

namespace pfno {

struct ContourPoint {
  double x;
  double y;
};

// Polylines in unwrapped coordinates: consecutive points differ by the
// minimum-image displacement, so closed loops around the torus do not close.
struct LevelSetContour {
  std::vector<std::vector<ContourPoint>> lines;
  std::vector<bool> closed;
  double domain = 1.0;

  double length() const;
  std::size_t point_count() const;
  bool empty() const { return lines.empty(); }
};

LevelSetContour zero_level_set(const Field2D& f);

// Absolute shoelace area of a closed polyline.
double polyline_area(const std::vector<ContourPoint>& line);

}  // namespace pfno
