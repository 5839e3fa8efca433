#pragma once

#include <string>

#include "pfno/nn/layers.hpp"

namespace pfno::nn {

enum class ModelKind { rdno, prescribed_rdno, unet, fno };

struct RdnoSpec {
  int width = 10;
  int depth = 2;
  int reaction_kernel = 3;
  int diffusion_kernel = 17;
  Activation activation = Activation::tanh;
};

struct UnetSpec {
  int in_channels = 1;
  int out_channels = 1;
  int levels = 4;
  int hidden = 2;
  int multiplier = 2;
  int kernel = 3;
  Activation activation = Activation::gelu;
};

struct FnoSpec {
  int in_channels = 1;
  int out_channels = 1;
  int layers = 4;
  int modes = 20;
  int width = 16;
  Activation activation = Activation::gelu;
};

struct ArchitectureSpec {
  ModelKind kind = ModelKind::rdno;
  RdnoSpec rdno;
  UnetSpec unet;  // also the diffusion block of prescribed_rdno
  FnoSpec fno;

  // Canonical key=value text; its digest identifies checkpoints.
  std::string text() const;
  static ArchitectureSpec parse(const std::string& text);

  // Throws InvalidArgument for even kernels, too many modes, bad divisibility.
  void validate(int grid_n) const;
  int input_channels() const;
};

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

// Paper configurations for the Allen-Cahn comparison and the dendrite UNet.
ArchitectureSpec ac_rdno_spec();
ArchitectureSpec ac_unet_spec();
ArchitectureSpec ac_fno_spec();
ArchitectureSpec dendrite_prescribed_spec();

}  // namespace pfno::nn
