#include "pfno/nn/tensor.hpp"

#include <algorithm>

#include "pfno/error.hpp"

namespace pfno::nn {

Tensor4 from_fields(const std::vector<Field2D>& channels) {
  if (channels.empty()) throw InvalidArgument("from_fields: no channels");
  const int n = channels.front().n();
  Tensor4 t(1, static_cast<int>(channels.size()), n, n);
  for (int ch = 0; ch < t.c; ++ch) {
    require_same_grid(channels.front(), channels[ch]);
    std::copy(channels[ch].v.begin(), channels[ch].v.end(), t.data(0, ch));
  }
  return t;
}

Tensor4 batch_from_fields(const std::vector<const Field2D*>& samples) {
  if (samples.empty()) throw InvalidArgument("batch_from_fields: empty batch");
  const int n = samples.front()->n();
  Tensor4 t(static_cast<int>(samples.size()), 1, n, n);
  for (int b = 0; b < t.n; ++b) {
    require_same_grid(*samples.front(), *samples[b]);
    std::copy(samples[b]->v.begin(), samples[b]->v.end(), t.data(b, 0));
  }
  return t;
}

Field2D to_field(const Tensor4& t, int b, int ch, const Grid2D& g) {
  if (t.h != g.n || t.w != g.n) throw InvalidArgument("to_field: shape mismatch");
  Field2D f(g);
  std::copy(t.data(b, ch), t.data(b, ch) + t.plane(), f.v.begin());
  return f;
}

Tensor4 concat_channels(const Tensor4& a, const Tensor4& b) {
  if (a.n != b.n || a.h != b.h || a.w != b.w) throw InvalidArgument("concat: shape mismatch");
  Tensor4 t(a.n, a.c + b.c, a.h, a.w);
  for (int s = 0; s < a.n; ++s) {
    std::copy(a.data(s, 0), a.data(s, 0) + a.plane() * a.c, t.data(s, 0));
    std::copy(b.data(s, 0), b.data(s, 0) + b.plane() * b.c, t.data(s, a.c));
  }
  return t;
}

void split_channels(const Tensor4& t, int ca, Tensor4& a, Tensor4& b) {
  a = Tensor4(t.n, ca, t.h, t.w);
  b = Tensor4(t.n, t.c - ca, t.h, t.w);
  for (int s = 0; s < t.n; ++s) {
    std::copy(t.data(s, 0), t.data(s, 0) + t.plane() * ca, a.data(s, 0));
    std::copy(t.data(s, ca), t.data(s, ca) + t.plane() * (t.c - ca), b.data(s, 0));
  }
}

}  // namespace pfno::nn
