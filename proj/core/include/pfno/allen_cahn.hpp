#pragma once

#include <random>
#include <utility>
#include <vector>

#include "pfno/field.hpp"

namespace pfno {

struct AcParams {
  double eps = 1.0 / 64.0;
  double beta = 2.001;
  double dt = 2.44e-4;
};

// Throws InvalidArgument when beta <= 2, eps < 2h or dt <= 0.
void validate(const AcParams& p, const Grid2D& g);

struct DoubleWell {
  double W;
  double dW;
};
DoubleWell double_well(double s);

double ac_energy(const Field2D& u, double eps);

// Convex part E1 = int |grad u|^2/2 + beta u^2/(2 eps^2) and concave rest E2.
double ac_energy_convex(const Field2D& u, const AcParams& p);
double ac_energy_concave(const Field2D& u, const AcParams& p);
Field2D ac_grad_convex(const Field2D& u, const AcParams& p);
Field2D ac_grad_concave(const Field2D& u, const AcParams& p);

// rho_beta(s) = s - (dt/eps^2)(W'(s) - beta s), pointwise.
Field2D ac_reaction(const Field2D& u, const AcParams& p);
Field2D ac_split_step(const Field2D& u, const AcParams& p);

double perimeter_epsilon(const Field2D& u, double eps);

struct PerturbedDiskSpec {
  double r = 0.25;
  double r_p = 0.0;
  std::vector<double> a;  // a_1..a_M
  std::vector<double> b;  // b_1..b_M
};

struct Point {
  double x;
  double y;
};

// Disk centered at the domain center; angle measured from the center.
Field2D ic_perturbed_disk(const Grid2D& g, const PerturbedDiskSpec& spec, double eps);
Field2D ic_multi_disk(const Grid2D& g, const std::vector<Point>& centers,
                      const std::vector<double>& radii, double eps);
Field2D ic_random_field(std::mt19937_64& rng, const Grid2D& g);

// Coefficients uniform in [-1,1], rejected until sum a_k^2 + b_k^2 <= 1.
PerturbedDiskSpec sample_disk_spec(std::mt19937_64& rng, int modes, double r_lo, double r_hi,
                                   double rp_lo, double rp_hi);

// Minimum-image distance on a periodic square of side L.
double periodic_distance(double x0, double y0, double x1, double y1, double L);

}  // namespace pfno
