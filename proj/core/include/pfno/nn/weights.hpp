#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pfno/digest.hpp"
#include "pfno/nn/architecture.hpp"

namespace pfno::nn {

struct ParamTensor {
  std::vector<int> shape;
  std::vector<double> v;
};

struct ModelWeights {
  std::map<std::string, ParamTensor> tensors;  // sorted name order
  std::string arch_text;

  const double* ptr(const std::string& name) const;
  double* ptr(const std::string& name);
  std::size_t parameter_count() const;
  ModelWeights zeros_like() const;
  Digest arch_digest() const { return sha256(arch_text); }

  // Flat views in name order, for optimizers and gradient checks.
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& flat);
};

enum class InitKind { conv, bias, spectral };

struct ParamSlot {
  std::string name;
  std::vector<int> shape;
  InitKind init;
  int fan_in;
};

std::vector<ParamSlot> param_layout(const ArchitectureSpec& spec);
ModelWeights init_weights(const ArchitectureSpec& spec, std::mt19937_64& rng);
ModelWeights zero_weights(const ArchitectureSpec& spec);

std::vector<char> checkpoint_bytes(const ModelWeights& w);
// Verifies the trailing digest against spec.text().
ModelWeights checkpoint_parse(const std::vector<char>& bytes, const ArchitectureSpec& spec);

// Writes `path` plus the spec text at `<path>.arch`.
void checkpoint_write(const ModelWeights& w, const std::filesystem::path& path);
ModelWeights checkpoint_read(const std::filesystem::path& path, const ArchitectureSpec& spec);
ArchitectureSpec checkpoint_arch(const std::filesystem::path& path);

}  // namespace pfno::nn
