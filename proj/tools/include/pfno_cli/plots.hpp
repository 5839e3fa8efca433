#pragma once

#include <filesystem>
#include <vector>

#include "pfno/field.hpp"

namespace pfno::cli {

// Diverging blue-white-red map over [lo, hi]; row 0 at the bottom.
void write_field_png(const std::filesystem::path& path, const Field2D& f, double lo = -1.0, double hi = 1.0);

// Polyline of y against sample index on a white canvas, auto-scaled.
void write_curve_png(const std::filesystem::path& path, const std::vector<double>& y, int width = 480,
                     int height = 320);

}  // namespace pfno::cli
