#pragma once

#include <utility>

#include "pfno/field.hpp"

namespace pfno {

// Signed integer frequency of index i on an n-point axis. The Nyquist index
// maps to -n/2.
int frequency(int i, int n);

// Frequency used by first derivatives: zero at Nyquist.
int derivative_frequency(int i, int n);

// Per-frequency real coefficients over the full n x n frequency table.
// Row index is the y frequency, column index the x frequency.
struct SpectralMultiplier {
  Grid2D grid;
  std::vector<double> coef;

  double at(int ky, int kx) const { return coef[static_cast<std::size_t>(ky) * grid.n + kx]; }
};

SpectralMultiplier laplacian_multiplier(const Grid2D& g);
SpectralMultiplier helmholtz_multiplier(const Grid2D& g, double c0, double c1, double dt);
Field2D apply_multiplier(const SpectralMultiplier& m, const Field2D& f);

std::pair<Field2D, Field2D> spectral_gradient(const Field2D& f);
Field2D spectral_divergence(const Field2D& fx, const Field2D& fy);
Field2D spectral_laplacian(const Field2D& f);

enum class LaplacianForm { full, div_grad };

// (I - dt (c1 Lap - c0))^-1 f.
Field2D helmholtz_inverse_apply(const Field2D& f, double c0, double c1, double dt,
                                LaplacianForm form = LaplacianForm::full);

// int |grad f|^2 as -<f, Lap f> with the full Laplacian.
double dirichlet_integral(const Field2D& f);

double integrate(const Field2D& f);

}  // namespace pfno
