#include "pfno/metrics/ivantsov.hpp"

#include <cmath>
#include <numbers>

#include "pfno/error.hpp"

namespace pfno {

double erfcx(double x) {
  if (x < 0.0) throw InvalidArgument("erfcx: negative argument");
  if (x < 4.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction, evaluated bottom-up; 60 levels is ample for x >= 4.
  double f = 0.0;
  for (int k = 60; k >= 1; --k) f = 0.5 * k / (x + f);
  return 1.0 / (std::sqrt(std::numbers::pi) * (x + f));
}

double ivantsov_residual(double pe, double kappa) {
  const double r = std::sqrt(pe);
  return std::sqrt(std::numbers::pi) * r * erfcx(r) + kappa;
}

double ivantsov_peclet(double kappa) {
  if (!(kappa > -1.0 && kappa < 0.0)) throw InvalidArgument("ivantsov_peclet: kappa must lie in (-1, 0)");
  double lo = 0.0, hi = 1.0;
  while (ivantsov_residual(hi, kappa) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ivantsov_residual(mid, kappa) < 0.0 ? lo : hi) = mid;
  }
  double pe = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double g = ivantsov_residual(pe, kappa) - kappa;
    const double dg = g * (0.5 / pe + 1.0) - 1.0;
    if (dg == 0.0) break;
    const double next = pe - (g + kappa) / dg;
    if (!(next > lo && next < hi)) break;
    pe = next;
  }
  return pe;
}

}  // namespace pfno
