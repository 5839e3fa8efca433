#pragma once

#include <complex>
#include <vector>

namespace pfno::fft {

using cplx = std::complex<double>;

// Real-to-half-complex 2D transform, unnormalized. Output is rows x (cols/2+1).
void forward(const double* in, int rows, int cols, cplx* out);
std::vector<cplx> forward(const std::vector<double>& in, int rows, int cols);

// Inverse of forward up to the factor rows*cols (not applied). Input is not
// modified; for non-Hermitian input the result is the real part of the full
// complex inverse.
void inverse(const cplx* in, int rows, int cols, double* out);

// Full complex 2D transforms, unnormalized; sign -1 forward, +1 backward.
void complex_transform(const cplx* in, int rows, int cols, int sign, cplx* out);

}  // namespace pfno::fft
