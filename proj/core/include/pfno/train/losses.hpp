#pragma once

#include "pfno/allen_cahn.hpp"
#include "pfno/dendrite.hpp"

namespace pfno {

// Loss value and its partial derivatives with respect to the grid values of pred.
struct LossGrad {
  double value = 0.0;
  Field2D grad;
};

double loss_deepritz_ac(const Field2D& pred, const Field2D& u_n, const AcParams& p);
LossGrad loss_deepritz_ac_grad(const Field2D& pred, const Field2D& u_n, const AcParams& p);

double loss_deepritz_dendrite(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p);
LossGrad loss_deepritz_dendrite_grad(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n,
                                     const DendriteParams& p);

double loss_data(const Field2D& pred, const Field2D& target);
LossGrad loss_data_grad(const Field2D& pred, const Field2D& target);

double loss_scheme_residual(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p);
LossGrad loss_scheme_residual_grad(const Field2D& pred, const Field2D& phi_n, const Field2D& U_n,
                                   const DendriteParams& p);

// The splitting step with isotropic E1 (sigma = 0), solved spectrally.
Field2D isotropic_split_step(const Field2D& phi_n, const Field2D& U_n, const DendriteParams& p);

}  // namespace pfno
