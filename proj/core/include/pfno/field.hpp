#pragma once

#include <cstddef>
#include <vector>

namespace pfno {

struct Grid2D {
  int n = 0;
  double length = 1.0;

  double spacing() const { return length / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  bool operator==(const Grid2D&) const = default;
};

Grid2D make_grid(int n, double length = 1.0);

// Periodic scalar field; row index is y, column index is x.
struct Field2D {
  Grid2D grid;
  std::vector<double> v;

  Field2D() = default;
  explicit Field2D(const Grid2D& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

  int n() const { return grid.n; }
  double& operator()(int row, int col) { return v[static_cast<std::size_t>(row) * grid.n + col]; }
  double operator()(int row, int col) const { return v[static_cast<std::size_t>(row) * grid.n + col]; }
  double x(int col) const { return col * grid.spacing(); }
  double y(int row) const { return row * grid.spacing(); }
};

void require_same_grid(const Field2D& a, const Field2D& b);
bool all_finite(const Field2D& f);
double max_abs(const Field2D& f);
double min_value(const Field2D& f);
double max_value(const Field2D& f);

// Quarter turn about the domain center (index n/2), periodic.
Field2D rotate90(const Field2D& f);

}  // namespace pfno
