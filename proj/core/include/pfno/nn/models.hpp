#pragma once

#include <map>
#include <string>

#include "pfno/dendrite.hpp"
#include "pfno/nn/architecture.hpp"
#include "pfno/nn/weights.hpp"

namespace pfno::nn {

// Intermediate activations kept by forward for the reverse pass.
using Cache = std::map<std::string, Tensor4>;

class Network {
 public:
  explicit Network(ArchitectureSpec spec, DendriteParams phys = dendrite_params(0.05));

  const ArchitectureSpec& spec() const { return spec_; }
  const DendriteParams& physics() const { return phys_; }

  // Prescribed RDNO takes channels (phi, U); the others take one channel.
  Tensor4 forward(const ModelWeights& w, const Tensor4& x, Cache* cache = nullptr) const;
  // Accumulates parameter gradients into grad and returns the input gradient.
  Tensor4 backward(const ModelWeights& w, const Cache& cache, const Tensor4& dy, ModelWeights& grad) const;

  // Spatial resolutions visited by the UNet encoder (for shape tracing).
  std::vector<int> unet_resolutions(int n) const;

 private:
  Tensor4 forward_rdno(const ModelWeights& w, const Tensor4& x, Cache* c) const;
  Tensor4 backward_rdno(const ModelWeights& w, const Cache& c, const Tensor4& dy, ModelWeights& g) const;
  Tensor4 forward_unet(const ModelWeights& w, const Tensor4& x, Cache* c) const;
  Tensor4 backward_unet(const ModelWeights& w, const Cache& c, const Tensor4& dy, ModelWeights& g) const;
  Tensor4 forward_fno(const ModelWeights& w, const Tensor4& x, Cache* c) const;
  Tensor4 backward_fno(const ModelWeights& w, const Cache& c, const Tensor4& dy, ModelWeights& g) const;
  Tensor4 reaction(const Tensor4& x) const;
  Tensor4 reaction_backward(const Tensor4& x, const Tensor4& dr) const;

  ArchitectureSpec spec_;
  DendriteParams phys_;
};

Tensor4 forward_rdno(const Tensor4& u, const ModelWeights& w, const ArchitectureSpec& spec);
Tensor4 forward_prescribed_rdno(const Tensor4& phi, const Tensor4& U, const ModelWeights& w,
                                const ArchitectureSpec& spec, const DendriteParams& p);
Tensor4 forward_unet(const Tensor4& x, const ModelWeights& w, const ArchitectureSpec& spec);
Tensor4 forward_fno(const Tensor4& x, const ModelWeights& w, const ArchitectureSpec& spec);

// Weights for which the RDNO is the identity map (lift/proj inverse pair,
// zero reaction convs, delta diffusion kernel).
ModelWeights identity_rdno_weights(const ArchitectureSpec& spec);

}  // namespace pfno::nn
