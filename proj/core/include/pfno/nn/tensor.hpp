#pragma once

#include <cstddef>
#include <vector>

#include "pfno/field.hpp"

namespace pfno::nn {

struct Tensor4 {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_, double fill = 0.0)
      : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

  std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
  std::size_t offset(int b, int ch) const { return (static_cast<std::size_t>(b) * c + ch) * plane(); }
  double* data(int b, int ch) { return v.data() + offset(b, ch); }
  const double* data(int b, int ch) const { return v.data() + offset(b, ch); }
  double& at(int b, int ch, int i, int j) { return v[offset(b, ch) + static_cast<std::size_t>(i) * w + j]; }
  double at(int b, int ch, int i, int j) const { return v[offset(b, ch) + static_cast<std::size_t>(i) * w + j]; }
  bool same_shape(const Tensor4& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }
};

// Stacks fields as channels of a single-sample tensor.
Tensor4 from_fields(const std::vector<Field2D>& channels);
// Stacks single-channel fields as a batch.
Tensor4 batch_from_fields(const std::vector<const Field2D*>& samples);
Field2D to_field(const Tensor4& t, int b, int ch, const Grid2D& g);

Tensor4 concat_channels(const Tensor4& a, const Tensor4& b);
// Splits channels [0, ca) and [ca, c).
void split_channels(const Tensor4& t, int ca, Tensor4& a, Tensor4& b);

}  // namespace pfno::nn
