#include "pfno/nn/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pfno/bytes.hpp"
#include "pfno/error.hpp"
#include "pfno/snapshot.hpp"

namespace pfno::nn {

const double* ModelWeights::ptr(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw InvalidArgument("missing weight tensor " + name);
  return it->second.v.data();
}

double* ModelWeights::ptr(const std::string& name) {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw InvalidArgument("missing weight tensor " + name);
  return it->second.v.data();
}

std::size_t ModelWeights::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [_, t] : tensors) n += t.v.size();
  return n;
}

ModelWeights ModelWeights::zeros_like() const {
  ModelWeights z = *this;
  for (auto& [_, t] : z.tensors) std::fill(t.v.begin(), t.v.end(), 0.0);
  return z;
}

std::vector<double> ModelWeights::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& [_, t] : tensors) out.insert(out.end(), t.v.begin(), t.v.end());
  return out;
}

void ModelWeights::unflatten(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) throw InvalidArgument("unflatten: size mismatch");
  std::size_t k = 0;
  for (auto& [_, t] : tensors)
    for (double& x : t.v) x = flat[k++];
}

namespace {

void conv_slot(std::vector<ParamSlot>& out, const std::string& name, int co, int ci, int k, bool bias = true) {
  out.push_back({name + ".w", {co, ci, k, k}, InitKind::conv, ci * k * k});
  if (bias) out.push_back({name + ".b", {co}, InitKind::bias, ci * k * k});
}

void tconv_slot(std::vector<ParamSlot>& out, const std::string& name, int ci, int co, int k) {
  out.push_back({name + ".w", {ci, co, k, k}, InitKind::conv, ci * k * k});
  out.push_back({name + ".b", {co}, InitKind::bias, ci * k * k});
}

void double_conv_slots(std::vector<ParamSlot>& out, const std::string& name, int ci, int co, int k) {
  conv_slot(out, name + ".c1", co, ci, k);
  conv_slot(out, name + ".c2", co, co, k);
}

}  // namespace

std::vector<ParamSlot> param_layout(const ArchitectureSpec& spec) {
  spec.validate(0);
  std::vector<ParamSlot> out;
  switch (spec.kind) {
    case ModelKind::rdno: {
      const auto& r = spec.rdno;
      conv_slot(out, "lift", r.width, 1, 1);
      for (int i = 0; i < r.depth; ++i) conv_slot(out, "react" + std::to_string(i), r.width, r.width, r.reaction_kernel);
      conv_slot(out, "proj", 1, r.width, 1);
      conv_slot(out, "diff", 1, 1, r.diffusion_kernel);
      break;
    }
    case ModelKind::prescribed_rdno:
    case ModelKind::unet: {
      const auto& u = spec.unet;
      const int cin = spec.kind == ModelKind::prescribed_rdno ? 1 : u.in_channels;
      double_conv_slots(out, "lift", cin, u.hidden, u.kernel);
      int c = u.hidden;
      for (int l = 0; l < u.levels; ++l) {
        const int cn = c * u.multiplier;
        const std::string s = std::to_string(l);
        conv_slot(out, "down" + s, c, c, u.kernel);
        double_conv_slots(out, "enc" + s, c, cn, u.kernel);
        tconv_slot(out, "up" + s, cn, c, u.kernel);
        double_conv_slots(out, "dec" + s, 2 * c, c, u.kernel);
        c = cn;
      }
      conv_slot(out, "proj", spec.kind == ModelKind::prescribed_rdno ? 1 : u.out_channels, u.hidden, 1);
      break;
    }
    case ModelKind::fno: {
      const auto& f = spec.fno;
      conv_slot(out, "lift", f.width, f.in_channels, 1);
      for (int l = 0; l < f.layers; ++l) {
        const std::string s = std::to_string(l);
        const int fan = f.width * f.width;
        out.push_back({"spec" + s + ".wr", {f.width, f.width, 2 * f.modes - 1, f.modes}, InitKind::spectral, fan});
        out.push_back({"spec" + s + ".wi", {f.width, f.width, 2 * f.modes - 1, f.modes}, InitKind::spectral, fan});
        conv_slot(out, "skip" + s, f.width, f.width, 1);
      }
      conv_slot(out, "proj", f.out_channels, f.width, 1);
      break;
    }
  }
  return out;
}

ModelWeights zero_weights(const ArchitectureSpec& spec) {
  ModelWeights w;
  w.arch_text = spec.text();
  for (const auto& slot : param_layout(spec)) {
    std::size_t n = 1;
    for (int d : slot.shape) n *= static_cast<std::size_t>(d);
    w.tensors[slot.name] = ParamTensor{slot.shape, std::vector<double>(n, 0.0)};
  }
  return w;
}

ModelWeights init_weights(const ArchitectureSpec& spec, std::mt19937_64& rng) {
  ModelWeights w = zero_weights(spec);
  const auto layout = param_layout(spec);
  std::map<std::string, const ParamSlot*> by_name;
  for (const auto& s : layout) by_name[s.name] = &s;
  for (auto& [name, t] : w.tensors) {
    const ParamSlot& slot = *by_name.at(name);
    if (slot.init == InitKind::bias) continue;
    if (slot.init == InitKind::conv) {
      const double bound = std::sqrt(1.0 / slot.fan_in);
      std::uniform_real_distribution<double> d(-bound, bound);
      for (double& x : t.v) x = d(rng);
    } else {
      std::uniform_real_distribution<double> d(0.0, 1.0 / slot.fan_in);
      for (double& x : t.v) x = d(rng);
    }
  }
  return w;
}

namespace {
constexpr char kMagic[8] = {'P', 'F', 'N', 'O', 'W', 'T', 'S', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::vector<char> checkpoint_bytes(const ModelWeights& w) {
  std::vector<char> out;
  bytes::put_raw(out, kMagic, 8);
  bytes::put_u32(out, kVersion);
  bytes::put_u32(out, static_cast<std::uint32_t>(w.tensors.size()));
  for (const auto& [name, t] : w.tensors) {
    bytes::put_u32(out, static_cast<std::uint32_t>(name.size()));
    bytes::put_raw(out, name.data(), name.size());
    bytes::put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (int d : t.shape) bytes::put_u32(out, static_cast<std::uint32_t>(d));
    for (double x : t.v) bytes::put_f64(out, x);
  }
  const Digest d = w.arch_digest();
  bytes::put_raw(out, d.data(), d.size());
  return out;
}

ModelWeights checkpoint_parse(const std::vector<char>& b, const ArchitectureSpec& spec) {
  bytes::Reader r(b, "checkpoint");
  if (r.str(8) != std::string(kMagic, 8)) throw FormatError("checkpoint: bad magic");
  if (r.u32() != kVersion) throw FormatError("checkpoint: unsupported version");
  const std::uint32_t count = r.u32();
  ModelWeights w;
  w.arch_text = spec.text();
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.str(r.u32());
    const std::uint32_t rank = r.u32();
    if (rank > 8) throw FormatError("checkpoint: implausible rank");
    ParamTensor t;
    std::size_t n = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      t.shape.push_back(static_cast<int>(r.u32()));
      n *= static_cast<std::size_t>(t.shape.back());
    }
    r.need(n * 8);
    t.v.resize(n);
    for (double& x : t.v) x = r.f64();
    w.tensors[name] = std::move(t);
  }
  if (r.remaining() != 32) throw FormatError("checkpoint: missing or oversized digest");
  const std::string digest = r.str(32);
  const Digest expect = w.arch_digest();
  if (digest != std::string(reinterpret_cast<const char*>(expect.data()), 32))
    throw FormatError("checkpoint: architecture digest mismatch");
  const ModelWeights ref = zero_weights(spec);
  if (ref.tensors.size() != w.tensors.size()) throw FormatError("checkpoint: tensor set mismatch");
  for (const auto& [name, t] : ref.tensors) {
    auto it = w.tensors.find(name);
    if (it == w.tensors.end() || it->second.shape != t.shape) throw FormatError("checkpoint: tensor " + name + " mismatch");
  }
  return w;
}

void checkpoint_write(const ModelWeights& w, const std::filesystem::path& path) {
  write_file(path, checkpoint_bytes(w));
  std::ofstream(path.string() + ".arch", std::ios::trunc) << w.arch_text;
}

ArchitectureSpec checkpoint_arch(const std::filesystem::path& path) {
  std::ifstream in(path.string() + ".arch");
  if (!in) throw InvalidArgument("missing architecture file for " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ArchitectureSpec::parse(ss.str());
}

ModelWeights checkpoint_read(const std::filesystem::path& path, const ArchitectureSpec& spec) {
  return checkpoint_parse(read_file(path), spec);
}

}  // namespace pfno::nn
