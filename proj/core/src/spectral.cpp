#include "pfno/spectral.hpp"

#include <cmath>
#include <numbers>

#include "pfno/error.hpp"
#include "pfno/fft.hpp"

namespace pfno {

using fft::cplx;

int frequency(int i, int n) { return i <= (n - 1) / 2 ? i : i - n; }

int derivative_frequency(int i, int n) {
  if (n % 2 == 0 && i == n / 2) return 0;
  return frequency(i, n);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int half(int n) { return n / 2 + 1; }

std::vector<cplx> to_spectrum(const Field2D& f) { return fft::forward(f.v, f.n(), f.n()); }

Field2D from_spectrum(const std::vector<cplx>& s, const Grid2D& g) {
  Field2D out(g);
  fft::inverse(s.data(), g.n, g.n, out.v.data());
  const double norm = 1.0 / (static_cast<double>(g.n) * g.n);
  for (double& x : out.v) x *= norm;
  return out;
}

// Squared wavenumber (2 pi k / L)^2 summed over both axes. The full form keeps
// the Nyquist value; div_grad zeroes it like the first derivatives do.
double k2(int ky, int kx, const Grid2D& g, LaplacianForm form = LaplacianForm::full) {
  auto fr = form == LaplacianForm::full ? frequency : derivative_frequency;
  const double a = kTwoPi * fr(kx, g.n) / g.length;
  const double b = kTwoPi * fr(ky, g.n) / g.length;
  return a * a + b * b;
}

}  // namespace

SpectralMultiplier laplacian_multiplier(const Grid2D& g) {
  SpectralMultiplier m{g, std::vector<double>(g.size())};
  for (int ky = 0; ky < g.n; ++ky)
    for (int kx = 0; kx < g.n; ++kx) m.coef[static_cast<std::size_t>(ky) * g.n + kx] = -k2(ky, kx, g);
  return m;
}

SpectralMultiplier helmholtz_multiplier(const Grid2D& g, double c0, double c1, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("helmholtz: dt must be positive");
  if (!(c1 > 0.0)) throw InvalidArgument("helmholtz: c1 must be positive");
  if (!(c0 >= 0.0)) throw InvalidArgument("helmholtz: c0 must be non-negative");
  SpectralMultiplier m{g, std::vector<double>(g.size())};
  for (int ky = 0; ky < g.n; ++ky)
    for (int kx = 0; kx < g.n; ++kx)
      m.coef[static_cast<std::size_t>(ky) * g.n + kx] = 1.0 / (1.0 + dt * (c1 * k2(ky, kx, g) + c0));
  return m;
}

Field2D apply_multiplier(const SpectralMultiplier& m, const Field2D& f) {
  if (!(m.grid == f.grid)) throw InvalidArgument("multiplier grid mismatch");
  const int n = f.n(), hc = half(n);
  auto s = to_spectrum(f);
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < hc; ++kx) s[static_cast<std::size_t>(ky) * hc + kx] *= m.at(ky, kx);
  return from_spectrum(s, f.grid);
}

std::pair<Field2D, Field2D> spectral_gradient(const Field2D& f) {
  const int n = f.n(), hc = half(n);
  const auto s = to_spectrum(f);
  std::vector<cplx> sx(s.size()), sy(s.size());
  for (int ky = 0; ky < n; ++ky) {
    const double b = kTwoPi * derivative_frequency(ky, n) / f.grid.length;
    for (int kx = 0; kx < hc; ++kx) {
      const double a = kTwoPi * derivative_frequency(kx, n) / f.grid.length;
      const std::size_t k = static_cast<std::size_t>(ky) * hc + kx;
      sx[k] = cplx(0.0, a) * s[k];
      sy[k] = cplx(0.0, b) * s[k];
    }
  }
  return {from_spectrum(sx, f.grid), from_spectrum(sy, f.grid)};
}

Field2D spectral_divergence(const Field2D& fx, const Field2D& fy) {
  require_same_grid(fx, fy);
  const int n = fx.n(), hc = half(n);
  auto sx = to_spectrum(fx);
  const auto sy = to_spectrum(fy);
  for (int ky = 0; ky < n; ++ky) {
    const double b = kTwoPi * derivative_frequency(ky, n) / fx.grid.length;
    for (int kx = 0; kx < hc; ++kx) {
      const double a = kTwoPi * derivative_frequency(kx, n) / fx.grid.length;
      const std::size_t k = static_cast<std::size_t>(ky) * hc + kx;
      sx[k] = cplx(0.0, a) * sx[k] + cplx(0.0, b) * sy[k];
    }
  }
  return from_spectrum(sx, fx.grid);
}

Field2D spectral_laplacian(const Field2D& f) {
  const int n = f.n(), hc = half(n);
  auto s = to_spectrum(f);
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < hc; ++kx) s[static_cast<std::size_t>(ky) * hc + kx] *= -k2(ky, kx, f.grid);
  return from_spectrum(s, f.grid);
}

Field2D helmholtz_inverse_apply(const Field2D& f, double c0, double c1, double dt, LaplacianForm form) {
  if (!(dt > 0.0)) throw InvalidArgument("helmholtz: dt must be positive");
  if (!(c1 > 0.0)) throw InvalidArgument("helmholtz: c1 must be positive");
  if (!(c0 >= 0.0)) throw InvalidArgument("helmholtz: c0 must be non-negative");
  const int n = f.n(), hc = half(n);
  auto s = to_spectrum(f);
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < hc; ++kx)
      s[static_cast<std::size_t>(ky) * hc + kx] *= 1.0 / (1.0 + dt * (c1 * k2(ky, kx, f.grid, form) + c0));
  return from_spectrum(s, f.grid);
}

double dirichlet_integral(const Field2D& f) {
  const int n = f.n(), hc = half(n);
  const auto s = to_spectrum(f);
  double acc = 0.0;
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < hc; ++kx) {
      const double w = (kx == 0 || (n % 2 == 0 && kx == n / 2)) ? 1.0 : 2.0;
      acc += w * k2(ky, kx, f.grid) * std::norm(s[static_cast<std::size_t>(ky) * hc + kx]);
    }
  const double h = f.grid.spacing();
  return acc * h * h / (static_cast<double>(n) * n);
}

double integrate(const Field2D& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  const double h = f.grid.spacing();
  return s * h * h;
}

}  // namespace pfno
