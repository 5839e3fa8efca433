#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "pfno/nn/models.hpp"

namespace pfno::nn {

using ForwardFn = std::function<Tensor4(const ModelWeights&, const Tensor4&)>;
// Returns dL/dx and accumulates dL/dw into grad for the probe L = <y, dy>.
using BackwardFn = std::function<Tensor4(const ModelWeights&, const Tensor4& x, const Tensor4& dy, ModelWeights& grad)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // tensor name, or "input"
};

// Central differences with step 1e-5 on up to `samples` entries per tensor.
// Error per tensor is max |ad - fd| over the checked entries divided by the
// largest |fd| in that tensor, floored at 1e-6 times the largest analytic
// gradient entry overall.
GradCheckResult grad_check(const ForwardFn& f, const BackwardFn& b, const ModelWeights& w, const Tensor4& x,
                           std::uint64_t seed = 1, int samples = 64, double step = 1e-5);

GradCheckResult grad_check(const Network& net, const ModelWeights& w, const Tensor4& x, std::uint64_t seed = 1,
                           int samples = 64);

}  // namespace pfno::nn
