#include "pfno/allen_cahn.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pfno/error.hpp"
#include "pfno/spectral.hpp"

namespace pfno {

void validate(const AcParams& p, const Grid2D& g) {
  if (!(p.beta > 2.0)) throw InvalidArgument("allen-cahn: beta must exceed 2");
  if (!(p.dt > 0.0)) throw InvalidArgument("allen-cahn: dt must be positive");
  if (!(p.eps >= 2.0 * g.spacing() * (1.0 - 1e-12)))
    throw InvalidArgument("allen-cahn: eps must be at least two grid spacings");
}

DoubleWell double_well(double s) {
  const double t = s * s - 1.0;
  return {0.25 * t * t, s * t};
}

namespace {

double grad_sq_integral(const Field2D& u) { return dirichlet_integral(u); }

double well_integral(const Field2D& u) {
  double s = 0.0;
  for (double x : u.v) s += double_well(x).W;
  const double h = u.grid.spacing();
  return s * h * h;
}

double sq_integral(const Field2D& u) {
  double s = 0.0;
  for (double x : u.v) s += x * x;
  const double h = u.grid.spacing();
  return s * h * h;
}

}  // namespace

double ac_energy(const Field2D& u, double eps) {
  return 0.5 * grad_sq_integral(u) + well_integral(u) / (eps * eps);
}

double ac_energy_convex(const Field2D& u, const AcParams& p) {
  return 0.5 * grad_sq_integral(u) + 0.5 * p.beta * sq_integral(u) / (p.eps * p.eps);
}

double ac_energy_concave(const Field2D& u, const AcParams& p) {
  return (well_integral(u) - 0.5 * p.beta * sq_integral(u)) / (p.eps * p.eps);
}

Field2D ac_grad_convex(const Field2D& u, const AcParams& p) {
  Field2D g = spectral_laplacian(u);
  const double c = p.beta / (p.eps * p.eps);
  for (std::size_t k = 0; k < g.v.size(); ++k) g.v[k] = -g.v[k] + c * u.v[k];
  return g;
}

Field2D ac_grad_concave(const Field2D& u, const AcParams& p) {
  Field2D g(u.grid);
  const double ie2 = 1.0 / (p.eps * p.eps);
  for (std::size_t k = 0; k < g.v.size(); ++k) g.v[k] = (double_well(u.v[k]).dW - p.beta * u.v[k]) * ie2;
  return g;
}

Field2D ac_reaction(const Field2D& u, const AcParams& p) {
  Field2D r(u.grid);
  const double c = p.dt / (p.eps * p.eps);
  for (std::size_t k = 0; k < r.v.size(); ++k) {
    const double s = u.v[k];
    r.v[k] = s - c * (double_well(s).dW - p.beta * s);
  }
  return r;
}

Field2D ac_split_step(const Field2D& u, const AcParams& p) {
  if (max_abs(u) > 1.1)
    spdlog::warn("ac_split_step: |u|_inf = {:.4f} exceeds the maximum-principle range", max_abs(u));
  return helmholtz_inverse_apply(ac_reaction(u, p), p.beta / (p.eps * p.eps), 1.0, p.dt);
}

double perimeter_epsilon(const Field2D& u, double eps) {
  return 0.5 * eps * grad_sq_integral(u) + well_integral(u) / eps;
}

double periodic_distance(double x0, double y0, double x1, double y1, double L) {
  double dx = std::abs(x1 - x0), dy = std::abs(y1 - y0);
  dx = std::fmod(dx, L);
  dy = std::fmod(dy, L);
  dx = std::min(dx, L - dx);
  dy = std::min(dy, L - dy);
  return std::hypot(dx, dy);
}

Field2D ic_perturbed_disk(const Grid2D& g, const PerturbedDiskSpec& spec, double eps) {
  if (spec.a.size() != spec.b.size()) throw InvalidArgument("disk spec: a and b differ in length");
  double norm = 0.0;
  for (std::size_t k = 0; k < spec.a.size(); ++k) {
    if (std::abs(spec.a[k]) > 1.0 || std::abs(spec.b[k]) > 1.0)
      throw InvalidArgument("disk spec: coefficients must lie in [-1,1]");
    norm += spec.a[k] * spec.a[k] + spec.b[k] * spec.b[k];
  }
  if (norm > 1.0 + 1e-12) throw InvalidArgument("disk spec: sum of squared coefficients exceeds 1");
  Field2D u(g);
  const double c = 0.5 * g.length;
  const double w = std::numbers::sqrt2 * eps;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double dx = u.x(j) - c, dy = u.y(i) - c;
      const double theta = std::atan2(dy, dx);
      double r = spec.r;
      for (std::size_t k = 0; k < spec.a.size(); ++k) {
        const double kk = static_cast<double>(k + 1);
        r += spec.r_p * (spec.a[k] * std::cos(kk * theta) + spec.b[k] * std::sin(kk * theta));
      }
      u(i, j) = std::tanh((r - std::hypot(dx, dy)) / w);
    }
  return u;
}

Field2D ic_multi_disk(const Grid2D& g, const std::vector<Point>& centers,
                      const std::vector<double>& radii, double eps) {
  if (centers.empty()) throw InvalidArgument("multi disk: no disks");
  if (centers.size() != radii.size()) throw InvalidArgument("multi disk: centers and radii differ");
  for (double r : radii)
    if (!(r > 0.0)) throw InvalidArgument("multi disk: radii must be positive");
  Field2D u(g, -1.0);
  const double w = std::numbers::sqrt2 * eps;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < centers.size(); ++d) {
        const double dist = periodic_distance(u.x(j), u.y(i), centers[d].x, centers[d].y, g.length);
        best = std::max(best, std::tanh((radii[d] - dist) / w));
      }
      u(i, j) = best;
    }
  return u;
}

Field2D ic_random_field(std::mt19937_64& rng, const Grid2D& g) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field2D u(g);
  for (double& x : u.v) x = dist(rng);
  return u;
}

PerturbedDiskSpec sample_disk_spec(std::mt19937_64& rng, int modes, double r_lo, double r_hi,
                                   double rp_lo, double rp_hi) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PerturbedDiskSpec s;
  s.r = r_lo + (r_hi - r_lo) * u01(rng);
  s.r_p = s.r * (rp_lo + (rp_hi - rp_lo) * u01(rng));
  s.a.resize(modes);
  s.b.resize(modes);
  for (;;) {
    double norm = 0.0;
    for (int k = 0; k < modes; ++k) {
      s.a[k] = unit(rng);
      s.b[k] = unit(rng);
      norm += s.a[k] * s.a[k] + s.b[k] * s.b[k];
    }
    if (norm <= 1.0) return s;
  }
}

}  // namespace pfno
