#pragma once

namespace pfno {

// exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

double ivantsov_residual(double pe, double kappa);

// Positive root of sqrt(pi Pe) e^Pe erfc(sqrt Pe) + kappa = 0, kappa in (-1, 0).
double ivantsov_peclet(double kappa);

}  // namespace pfno
