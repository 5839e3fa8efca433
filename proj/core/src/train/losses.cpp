#include "pfno/train/losses.hpp"

#include "pfno/spectral.hpp"

namespace pfno {

namespace {

double inner(const Field2D& a, const Field2D& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
  const double h = a.grid.spacing();
  return s * h * h;
}

Field2D diff(const Field2D& a, const Field2D& b) {
  require_same_grid(a, b);
  Field2D d(a.grid);
  for (std::size_t k = 0; k < d.v.size(); ++k) d.v[k] = a.v[k] - b.v[k];
  return d;
}

double cell_area(const Field2D& f) {
  const double h = f.grid.spacing();
  return h * h;
}

}  // namespace

double loss_deepritz_ac(const Field2D& pred, const Field2D& u_n, const AcParams& p) {
  const Field2D d = diff(pred, u_n);
  return inner(d, d) / (2.0 * p.dt) + ac_energy_convex(pred, p) + ac_energy_concave(u_n, p) +
         inner(ac_grad_concave(u_n, p), d);
}

LossGrad loss_deepritz_ac_grad(const Field2D& pred, const Field2D& u_n, const AcParams& p) {
  LossGrad out{loss_deepritz_ac(pred, u_n, p), ac_grad_convex(pred, p)};
  const Field2D g2 = ac_grad_concave(u_n, p);
  const double a = cell_area(pred);
  for (std::size_t k = 0; k < out.grad.v.size(); ++k)
    out.grad.v[k] = a * ((pred.v[k] - u_n.v[k]) / p.dt + out.grad.v[k] + g2.v[k]);
  return out;
}

double loss_deepritz_dendrite(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p) {
  const Field2D d = diff(pred, phi_n);
  return p.tau * inner(d, d) / (2.0 * p.dt) + dendrite_energy_convex(pred, p) +
         dendrite_energy_concave(phi_n, U_n, p) + inner(grad_phi_E2(phi_n, U_n, p), d);
}

LossGrad loss_deepritz_dendrite_grad(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n,
                                     const DendriteParams& p) {
  LossGrad out{loss_deepritz_dendrite(pred, phi_n, U_n, p), grad_phi_E1(pred, p)};
  const Field2D g2 = grad_phi_E2(phi_n, U_n, p);
  const double a = cell_area(pred);
  for (std::size_t k = 0; k < out.grad.v.size(); ++k)
    out.grad.v[k] = a * (p.tau * (pred.v[k] - phi_n.v[k]) / p.dt + out.grad.v[k] + g2.v[k]);
  return out;
}

double loss_data(const Field2D& pred, const Field2D& target) {
  const Field2D d = diff(pred, target);
  double s = 0.0;
  for (double x : d.v) s += x * x;
  return s / static_cast<double>(d.v.size());
}

LossGrad loss_data_grad(const Field2D& pred, const Field2D& target) {
  LossGrad out{loss_data(pred, target), diff(pred, target)};
  const double c = 2.0 / static_cast<double>(out.grad.v.size());
  for (double& x : out.grad.v) x *= c;
  return out;
}

namespace {

Field2D scheme_residual(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p) {
  Field2D r = grad_phi_E1(pred, p);
  const Field2D g2 = grad_phi_E2(phi_n, U_n, p);
  for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] += p.tau * (pred.v[k] - phi_n.v[k]) / p.dt + g2.v[k];
  return r;
}

}  // namespace

double loss_scheme_residual(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p) {
  const Field2D r = scheme_residual(pred, phi_n, U_n, p);
  return inner(r, r);
}

LossGrad loss_scheme_residual_grad(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n,
                                   const DendriteParams& p) {
  const Field2D r = scheme_residual(pred, phi_n, U_n, p);
  LossGrad out{inner(r, r), hessian_E1_apply(pred, r, p)};
  const double a = cell_area(pred);
  for (std::size_t k = 0; k < out.grad.v.size(); ++k)
    out.grad.v[k] = 2.0 * a * (p.tau * r.v[k] / p.dt + out.grad.v[k]);
  return out;
}

Field2D isotropic_split_step(const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p) {
  const Field2D g2 = grad_phi_E2(phi_n, U_n, p);
  Field2D rhs(phi_n.grid);
  const double r = p.dt / p.tau;
  for (std::size_t k = 0; k < rhs.v.size(); ++k) rhs.v[k] = phi_n.v[k] - r * g2.v[k];
  return helmholtz_inverse_apply(rhs, p.beta / (p.eps * p.eps), 1.0, r, LaplacianForm::div_grad);
}

}  // namespace pfno
