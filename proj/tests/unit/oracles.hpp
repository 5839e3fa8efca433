#pragma once

// Brute-force reference computations shared by the unit tests.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "pfno/field.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

inline int signed_freq(int i, int n) { return i < n / 2 ? i : i - n; }

// Applies a real multiplier m(kx, ky) (integer frequencies) by dense DFT sums.
inline pfno::Field2D dense_multiplier(const pfno::Field2D& f, const std::function<double(int, int)>& m) {
  const int n = f.n();
  std::vector<cplx> F(static_cast<std::size_t>(n) * n);
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < n; ++kx) {
      cplx s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += f(i, j) * std::polar(1.0, -2 * pi * (double(ky) * i + double(kx) * j) / n);
      F[ky * n + kx] = s * m(signed_freq(kx, n), signed_freq(ky, n));
    }
  pfno::Field2D out(f.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0;
      for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) s += F[ky * n + kx] * std::polar(1.0, 2 * pi * (double(ky) * i + double(kx) * j) / n);
      out(i, j) = s.real() / (double(n) * n);
    }
  return out;
}

inline pfno::Field2D random_field(int n, std::uint64_t seed, double lo = -1.0, double hi = 1.0, double length = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  pfno::Field2D f(pfno::make_grid(n, length));
  for (double& x : f.v) x = d(rng);
  return f;
}

// Smooth random field: a few low Fourier modes with random amplitudes.
inline pfno::Field2D smooth_field(int n, std::uint64_t seed, double amp = 0.5, double length = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  pfno::Field2D f(pfno::make_grid(n, length));
  for (int kx = 0; kx <= 2; ++kx)
    for (int ky = -2; ky <= 2; ++ky) {
      const double a = d(rng) * amp / 4, b = d(rng) * amp / 4;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double ph = 2 * pi * (kx * f.x(j) + ky * f.y(i)) / length;
          f(i, j) += a * std::cos(ph) + b * std::sin(ph);
        }
    }
  return f;
}

inline pfno::Field2D from_fn(int n, const std::function<double(double, double)>& g, double length = 1.0) {
  pfno::Field2D f(pfno::make_grid(n, length));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i, j) = g(f.x(j), f.y(i));
  return f;
}

inline double max_diff(const pfno::Field2D& a, const pfno::Field2D& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.v.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

// Central difference of a scalar functional in the direction of grid value k.
inline double fd_partial(const std::function<double(const pfno::Field2D&)>& E, pfno::Field2D f, std::size_t k,
                         double step) {
  const double x = f.v[k];
  f.v[k] = x + step;
  const double ep = E(f);
  f.v[k] = x - step;
  const double em = E(f);
  return (ep - em) / (2 * step);
}

}  // namespace oracle
