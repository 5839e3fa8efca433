#include "pfno/dendrite.hpp"

#include <cmath>
#include <numbers>

#include "pfno/error.hpp"
#include "pfno/spectral.hpp"

namespace pfno {

DendriteParams dendrite_params(double sigma) {
  DendriteParams p;
  p.sigma = sigma;
  p.lambda0 = p.D * p.tau / (kThinInterfaceA2 * p.eps);
  p.alpha_sav = (1.0 + sigma) * (1.0 + sigma);
  return p;
}

void validate(const DendriteParams& p) {
  if (!(p.sigma > 0.0 && p.sigma < 1.0 / 15.0)) throw InvalidArgument("dendrite: sigma must lie in (0, 1/15)");
  if (p.m != 4) throw InvalidArgument("dendrite: only m = 4 is supported");
  if (!(p.eps > 0 && p.tau > 0 && p.D > 0 && p.K > 0 && p.dt > 0))
    throw InvalidArgument("dendrite: eps, tau, D, K, dt must be positive");
  if (!(p.kappa >= -1.0 && p.kappa < 0.0)) throw InvalidArgument("dendrite: kappa must lie in [-1, 0)");
  const double expected = p.D * p.tau / (kThinInterfaceA2 * p.eps);
  if (std::abs(p.lambda0 - expected) > 1e-6 * expected)
    throw InvalidArgument("dendrite: lambda0 must equal D tau / (0.6267 eps)");
  // Concavity of E2 on [-1,1] x [kappa, 0]: 2 + 4 lambda0 eps |kappa| max|s^3 - s| - beta < 0.
  const double bound = 2.0 + 4.0 * p.lambda0 * p.eps * std::abs(p.kappa) * (2.0 / (3.0 * std::sqrt(3.0)));
  if (!(bound - p.beta < 0.0)) throw InvalidArgument("dendrite: beta too small for concavity of E2");
  if (!(p.alpha_sav > 0.0)) throw InvalidArgument("dendrite: alpha_sav must be positive");
  if (!(p.c0_sav >= 0.0)) throw InvalidArgument("dendrite: c0_sav must be non-negative");
}

Interp interp_h(double s) {
  const double s2 = s * s;
  return {s * (s2 * s2 / 5.0 - 2.0 * s2 / 3.0 + 1.0), (s2 - 1.0) * (s2 - 1.0)};
}

namespace {

struct Aniso {
  double a;
  double s;  // sigma m sin(m theta)
  double c;  // cos(m theta)
  bool flat;
};

Aniso aniso_point(double gx, double gy, double sigma) {
  const double g2 = gx * gx + gy * gy;
  if (g2 < kGradientFloor) return {1.0, 0.0, 1.0, true};
  const double ig4 = 1.0 / (g2 * g2);
  const double c4 = 1.0 - 8.0 * gx * gx * gy * gy * ig4;
  const double s4 = 4.0 * gx * gy * (gx * gx - gy * gy) * ig4;
  return {1.0 + sigma * c4, sigma * 4.0 * s4, c4, false};
}

double sum_h2(const Field2D& f, double acc) {
  const double h = f.grid.spacing();
  return acc * h * h;
}

// int 1/2 a^2 |grad phi|^2 from precomputed gradients.
double anisotropic_gradient_energy(const Field2D& gx, const Field2D& gy, double sigma) {
  double s = 0.0;
  for (std::size_t k = 0; k < gx.v.size(); ++k) {
    const double a = aniso_point(gx.v[k], gy.v[k], sigma).a;
    s += 0.5 * a * a * (gx.v[k] * gx.v[k] + gy.v[k] * gy.v[k]);
  }
  return sum_h2(gx, s);
}

double bulk_energy(const Field2D& phi, const Field2D& U, const DendriteParams& p) {
  const double cu = p.lambda0 / (2.0 * p.eps * p.K);
  const double cw = 1.0 / (p.eps * p.eps);
  const double ch = p.lambda0 / p.eps;
  double s = 0.0;
  for (std::size_t k = 0; k < phi.v.size(); ++k) {
    const double f = phi.v[k], u = U.v[k];
    s += cu * u * u + cw * double_well(f).W + ch * interp_h(f).h * u;
  }
  return sum_h2(phi, s);
}

double sq_integral(const Field2D& f) {
  double s = 0.0;
  for (double x : f.v) s += x * x;
  return sum_h2(f, s);
}

// Flux of the anisotropic gradient energy, d/dp of 1/2 a^2 |p|^2.
std::pair<Field2D, Field2D> anisotropic_flux(const Field2D& gx, const Field2D& gy, double sigma) {
  Field2D fx(gx.grid), fy(gx.grid);
  for (std::size_t k = 0; k < gx.v.size(); ++k) {
    const double px = gx.v[k], py = gy.v[k];
    const Aniso an = aniso_point(px, py, sigma);
    fx.v[k] = an.a * an.a * px + an.a * an.s * py;
    fy.v[k] = an.a * an.a * py - an.a * an.s * px;
  }
  return {fx, fy};
}

double energy_from_gradients(const Field2D& phi, const Field2D& U, const Field2D& gx, const Field2D& gy,
                             const DendriteParams& p) {
  return anisotropic_gradient_energy(gx, gy, p.sigma) + bulk_energy(phi, U, p);
}

}  // namespace

Anisotropy anisotropy_factor(const Field2D& gx, const Field2D& gy, double sigma, int m) {
  if (m != 4) throw InvalidArgument("anisotropy: unsupported symmetry order (only m = 4)");
  require_same_grid(gx, gy);
  Anisotropy out{Field2D(gx.grid), Field2D(gx.grid)};
  for (std::size_t k = 0; k < gx.v.size(); ++k) {
    const Aniso an = aniso_point(gx.v[k], gy.v[k], sigma);
    out.a.v[k] = an.a;
    out.sine_term.v[k] = an.s;
  }
  return out;
}

double dendrite_energy(const Field2D& phi, const Field2D& U, const DendriteParams& p) {
  require_same_grid(phi, U);
  auto [gx, gy] = spectral_gradient(phi);
  return energy_from_gradients(phi, U, gx, gy, p);
}

double dendrite_energy_convex(const Field2D& phi, const DendriteParams& p) {
  auto [gx, gy] = spectral_gradient(phi);
  return anisotropic_gradient_energy(gx, gy, p.sigma) + 0.5 * p.beta * sq_integral(phi) / (p.eps * p.eps);
}

double dendrite_energy_concave(const Field2D& phi, const Field2D& U, const DendriteParams& p) {
  return bulk_energy(phi, U, p) - 0.5 * p.beta * sq_integral(phi) / (p.eps * p.eps);
}

Field2D grad_phi_E1(const Field2D& phi, const DendriteParams& p) {
  auto [gx, gy] = spectral_gradient(phi);
  auto [fx, fy] = anisotropic_flux(gx, gy, p.sigma);
  Field2D g = spectral_divergence(fx, fy);
  const double c = p.beta / (p.eps * p.eps);
  for (std::size_t k = 0; k < g.v.size(); ++k) g.v[k] = -g.v[k] + c * phi.v[k];
  return g;
}

Field2D grad_phi_E2(const Field2D& phi, const Field2D& U, const DendriteParams& p) {
  require_same_grid(phi, U);
  Field2D g(phi.grid);
  const double ie2 = 1.0 / (p.eps * p.eps);
  const double ch = p.lambda0 / p.eps;
  for (std::size_t k = 0; k < g.v.size(); ++k) {
    const double f = phi.v[k];
    g.v[k] = double_well(f).dW * ie2 + ch * interp_h(f).dh * U.v[k] - p.beta * f * ie2;
  }
  return g;
}

Field2D hessian_E1_apply(const Field2D& phi, const Field2D& dir, const DendriteParams& p) {
  require_same_grid(phi, dir);
  auto [gx, gy] = spectral_gradient(phi);
  auto [dx, dy] = spectral_gradient(dir);
  const double m = p.m;
  Field2D hx(phi.grid), hy(phi.grid);
  for (std::size_t k = 0; k < gx.v.size(); ++k) {
    const double p1 = gx.v[k], p2 = gy.v[k];
    const Aniso an = aniso_point(p1, p2, p.sigma);
    double h11 = 1.0, h12 = 0.0, h22 = 1.0;
    if (!an.flat) {
      // f = g(theta) rho^2 / 2 with g = a^2.
      const double r2 = p1 * p1 + p2 * p2;
      const double g = an.a * an.a;
      const double g1 = -2.0 * an.a * an.s;
      const double g2 = 2.0 * an.s * an.s - 2.0 * an.a * p.sigma * m * m * an.c;
      const double j1 = -p2, j2 = p1;
      h11 = g + g1 / r2 * (-p1 * p2) + 0.5 * g2 / r2 * j1 * j1;
      h12 = g1 / r2 * 0.5 * (p1 * p1 - p2 * p2) + 0.5 * g2 / r2 * j1 * j2;
      h22 = g + g1 / r2 * (p1 * p2) + 0.5 * g2 / r2 * j2 * j2;
    }
    hx.v[k] = h11 * dx.v[k] + h12 * dy.v[k];
    hy.v[k] = h12 * dx.v[k] + h22 * dy.v[k];
  }
  Field2D out = spectral_divergence(hx, hy);
  const double c = p.beta / (p.eps * p.eps);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = -out.v[k] + c * dir.v[k];
  return out;
}

Field2D heat_step_implicit(const Field2D& U, const Field2D& phi_new, const Field2D& phi_old,
                           const DendriteParams& p) {
  require_same_grid(U, phi_new);
  require_same_grid(U, phi_old);
  Field2D rhs(U.grid);
  for (std::size_t k = 0; k < rhs.v.size(); ++k)
    rhs.v[k] = U.v[k] + p.K * interp_h(phi_new.v[k]).dh * (phi_new.v[k] - phi_old.v[k]);
  return helmholtz_inverse_apply(rhs, 0.0, p.D, p.dt);
}

SavState sav_init(Field2D phi, Field2D U, const DendriteParams& p) {
  const double e = dendrite_energy(phi, U, p);
  return SavState{std::move(phi), std::move(U), e + p.c0_sav};
}

SavState sav_step(const SavState& s, const DendriteParams& p) {
  const Field2D& phi = s.phi;
  const double ie2 = 1.0 / (p.eps * p.eps);
  const double c0 = p.c0_sav;

  // Predictor: implicit alpha Lap - beta/eps^2, everything else explicit.
  auto [gx, gy] = spectral_gradient(phi);
  const double e_old = energy_from_gradients(phi, s.U, gx, gy, p);
  auto [fx, fy] = anisotropic_flux(gx, gy, p.sigma);
  for (std::size_t k = 0; k < fx.v.size(); ++k) {
    fx.v[k] -= p.alpha_sav * gx.v[k];
    fy.v[k] -= p.alpha_sav * gy.v[k];
  }
  Field2D rhs = spectral_divergence(fx, fy);
  const double ch = p.lambda0 / p.eps;
  const double r = p.dt / p.tau;
  for (std::size_t k = 0; k < rhs.v.size(); ++k) {
    const double f = phi.v[k];
    const double grad_e2 = -rhs.v[k] + double_well(f).dW * ie2 + ch * interp_h(f).dh * s.U.v[k] - p.beta * f * ie2;
    rhs.v[k] = f - r * grad_e2;
  }
  Field2D phi_bar = helmholtz_inverse_apply(rhs, p.beta * ie2, p.alpha_sav, r);
  Field2D U_bar = heat_step_implicit(s.U, phi_bar, phi, p);

  auto [bx, by] = spectral_gradient(phi_bar);
  const double e_bar = energy_from_gradients(phi_bar, U_bar, bx, by, p);
  if (!(e_bar + c0 > 0.0) || !(e_old + c0 > 0.0))
    throw NumericalError("sav_step: non-positive auxiliary energy denominator");
  const double dE_t = (e_bar - e_old) / p.dt;
  const double q_bar = s.q / (1.0 - p.dt * dE_t / (e_bar + c0));
  const double xi = q_bar / (e_bar + c0);
  const double eta = 1.0 - (1.0 - xi) * (1.0 - xi);

  SavState out{std::move(phi_bar), std::move(U_bar), 0.0};
  for (double& x : out.phi.v) x *= eta;
  for (double& x : out.U.v) x *= eta;
  for (double& x : bx.v) x *= eta;
  for (double& x : by.v) x *= eta;
  const double e_new = energy_from_gradients(out.phi, out.U, bx, by, p);

  // Relaxation q = zeta q_bar + (1 - zeta)(E + c0) subject to
  // (q - q_bar)/dt <= -xi dE_t. With s = 1 - zeta: s A <= B.
  const double A = e_new + c0 - q_bar;
  const double B = s.q - q_bar;
  double relax = 0.0;
  if (A <= 0.0) {
    relax = 1.0;
  } else if (B >= 0.0) {
    relax = std::min(1.0, B / A);
  }
  out.q = q_bar + relax * A;
  if (!std::isfinite(out.q) || !all_finite(out.phi) || !all_finite(out.U))
    throw NumericalError("sav_step: non-finite state");
  return out;
}

std::pair<Field2D, Field2D> ic_dendrite(const Grid2D& g, const std::vector<Point>& centers,
                                        const DendriteParams& p) {
  if (centers.empty()) throw InvalidArgument("ic_dendrite: no centers");
  Field2D phi = ic_multi_disk(g, centers, std::vector<double>(centers.size(), 5.0 * p.eps), p.eps);
  Field2D U(g);
  for (std::size_t k = 0; k < U.v.size(); ++k) U.v[k] = phi.v[k] > 0.0 ? 0.0 : p.kappa;
  return {std::move(phi), std::move(U)};
}

double solid_fraction(const Field2D& phi) {
  double s = 0.0;
  for (double x : phi.v) s += 0.5 * (1.0 + x);
  const double h = phi.grid.spacing();
  return s * h * h / (phi.grid.length * phi.grid.length);
}

}  // namespace pfno
