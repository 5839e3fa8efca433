#include "pfno/field.hpp"

#include <algorithm>
#include <cmath>

#include "pfno/error.hpp"

namespace pfno {

Grid2D make_grid(int n, double length) {
  if (n < 4) throw InvalidArgument("grid needs n >= 4");
  if (!(length > 0.0)) throw InvalidArgument("grid length must be positive");
  return Grid2D{n, length};
}

void require_same_grid(const Field2D& a, const Field2D& b) {
  if (!(a.grid == b.grid) || a.v.size() != b.v.size())
    throw InvalidArgument("fields live on different grids");
}

bool all_finite(const Field2D& f) {
  return std::all_of(f.v.begin(), f.v.end(), [](double x) { return std::isfinite(x); });
}

double max_abs(const Field2D& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double min_value(const Field2D& f) { return *std::min_element(f.v.begin(), f.v.end()); }
double max_value(const Field2D& f) { return *std::max_element(f.v.begin(), f.v.end()); }

Field2D rotate90(const Field2D& f) {
  const int n = f.n();
  const int c = n / 2;
  Field2D g(f.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = f(((2 * c - j) % n + n) % n, i);
  return g;
}

}  // namespace pfno
