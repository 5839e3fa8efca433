#pragma once

#include <utility>
#include <vector>

#include "pfno/allen_cahn.hpp"
#include "pfno/field.hpp"

namespace pfno {

struct DendriteParams {
  double sigma = 0.05;
  int m = 4;
  double eps = 1.0 / 400.0;
  double tau = 1.6e5;
  double lambda0 = 0.0;  // filled by dendrite_params()
  double D = 6.25e-5;
  double K = 0.5;
  double kappa = -0.3;
  double beta = 14.4;
  double dt = 0.04;
  double alpha_sav = 0.0;  // filled by dendrite_params()
  double c0_sav = 1.0;
};

inline constexpr double kThinInterfaceA2 = 0.6267;
inline constexpr double kGradientFloor = 1e-12;

// Table values with lambda0 = D tau / (0.6267 eps) and alpha = (1+sigma)^2.
DendriteParams dendrite_params(double sigma);
void validate(const DendriteParams& p);

struct Interp {
  double h;
  double dh;
};
Interp interp_h(double s);

struct Anisotropy {
  Field2D a;
  Field2D sine_term;  // sigma m sin(m Theta)
};
Anisotropy anisotropy_factor(const Field2D& gx, const Field2D& gy, double sigma, int m);

double dendrite_energy(const Field2D& phi, const Field2D& U, const DendriteParams& p);
double dendrite_energy_convex(const Field2D& phi, const DendriteParams& p);
double dendrite_energy_concave(const Field2D& phi, const Field2D& U, const DendriteParams& p);

Field2D grad_phi_E1(const Field2D& phi, const DendriteParams& p);
Field2D grad_phi_E2(const Field2D& phi, const Field2D& U, const DendriteParams& p);
// Second variation of E1 at phi applied to dir.
Field2D hessian_E1_apply(const Field2D& phi, const Field2D& dir, const DendriteParams& p);

Field2D heat_step_implicit(const Field2D& U, const Field2D& phi_new, const Field2D& phi_old,
                           const DendriteParams& p);

struct SavState {
  Field2D phi;
  Field2D U;
  double q = 0.0;
};

SavState sav_init(Field2D phi, Field2D U, const DendriteParams& p);
SavState sav_step(const SavState& s, const DendriteParams& p);

std::pair<Field2D, Field2D> ic_dendrite(const Grid2D& g, const std::vector<Point>& centers,
                                        const DendriteParams& p);

double solid_fraction(const Field2D& phi);

}  // namespace pfno
