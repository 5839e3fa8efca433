#pragma once

#include <string>
#include <vector>

#include "pfno/nn/tensor.hpp"

namespace pfno::nn {

// Kernel layout [out][in][k][k]; cross-correlation with circular padding k/2.
struct ConvShape {
  int in = 1, out = 1, k = 1, stride = 1;
};

Tensor4 conv2d_periodic(const Tensor4& x, const double* kernel, const double* bias, const ConvShape& s);
// Accumulates into dx/dk/db; null pointers skip that gradient.
void conv2d_periodic_backward(const Tensor4& x, const double* kernel, const ConvShape& s, const Tensor4& dy,
                              Tensor4* dx, double* dk, double* db);

// Adjoint of the strided conv: kernel layout [in][out][k][k], output dims x stride.
Tensor4 conv_transpose2d_periodic(const Tensor4& x, const double* kernel, const double* bias, const ConvShape& s);
void conv_transpose2d_periodic_backward(const Tensor4& x, const double* kernel, const ConvShape& s,
                                        const Tensor4& dy, Tensor4* dx, double* dk, double* db);

// Complex channel mixing on kx in (-modes, modes), ky in [0, modes).
// Weight layout [in][out][2 modes - 1][modes], real and imaginary parts apart.
struct SpectralShape {
  int in = 1, out = 1, modes = 1;
  std::size_t weights_per_part() const { return static_cast<std::size_t>(in) * out * (2 * modes - 1) * modes; }
};

Tensor4 spectral_conv(const Tensor4& x, const double* wr, const double* wi, const SpectralShape& s);
void spectral_conv_backward(const Tensor4& x, const double* wr, const double* wi, const SpectralShape& s,
                            const Tensor4& dy, Tensor4* dx, double* dwr, double* dwi);

enum class Activation { identity, tanh, relu, gelu };
Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

Tensor4 activate(const Tensor4& x, Activation a);
// dx = dy * act'(x) where x is the pre-activation.
Tensor4 activate_backward(const Tensor4& x, Activation a, const Tensor4& dy);

}  // namespace pfno::nn
