#include "pfno_cli/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

#include "pfno/error.hpp"

namespace pfno::cli {

namespace {

using Rgb = std::array<unsigned char, 3>;

void write_rgb(const std::filesystem::path& path, int w, int h, const std::vector<Rgb>& px) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) throw InvalidArgument("cannot open " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write failed for " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < h; ++r)
    png_write_row(png, const_cast<png_bytep>(reinterpret_cast<const unsigned char*>(px.data() + static_cast<std::size_t>(r) * w)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Rgb diverging(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto mix = [](double a, double b, double s) { return static_cast<unsigned char>(std::lround(a + (b - a) * s)); };
  if (t < 0.5) {
    const double s = t / 0.5;
    return {mix(59, 255, s), mix(76, 255, s), mix(192, 255, s)};
  }
  const double s = (t - 0.5) / 0.5;
  return {mix(255, 180, s), mix(255, 4, s), mix(255, 38, s)};
}

}  // namespace

void write_field_png(const std::filesystem::path& path, const Field2D& f, double lo, double hi) {
  const int n = f.grid.n;
  std::vector<Rgb> px(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) px[static_cast<std::size_t>(r) * n + c] = diverging((f(n - 1 - r, c) - lo) / (hi - lo));
  write_rgb(path, n, n, px);
}

void write_curve_png(const std::filesystem::path& path, const std::vector<double>& y, int width, int height) {
  std::vector<Rgb> px(static_cast<std::size_t>(width) * height, Rgb{255, 255, 255});
  std::vector<double> v;
  for (double x : y)
    if (std::isfinite(x)) v.push_back(x);
  if (v.size() >= 2) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    const double lo = *mn, span = *mx > *mn ? *mx - *mn : 1.0;
    const int pad = 10;
    auto to_px = [&](std::size_t k, double val) {
      const double x = pad + (width - 2.0 * pad) * k / static_cast<double>(v.size() - 1);
      const double yy = height - pad - (height - 2.0 * pad) * (val - lo) / span;
      return std::pair{x, yy};
    };
    for (std::size_t k = 1; k < v.size(); ++k) {
      const auto [x0, y0] = to_px(k - 1, v[k - 1]);
      const auto [x1, y1] = to_px(k, v[k]);
      const int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
      for (int s = 0; s <= steps; ++s) {
        const double t = s / static_cast<double>(steps);
        const int xi = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
        const int yi = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
        if (xi >= 0 && xi < width && yi >= 0 && yi < height) px[static_cast<std::size_t>(yi) * width + xi] = {20, 20, 120};
      }
    }
  }
  write_rgb(path, width, height, px);
}

}  // namespace pfno::cli
