#include "pfno/nn/architecture.hpp"

#include <map>
#include <sstream>

#include "pfno/error.hpp"

namespace pfno::nn {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::rdno: return "rdno";
    case ModelKind::prescribed_rdno: return "prescribed_rdno";
    case ModelKind::unet: return "unet";
    case ModelKind::fno: return "fno";
  }
  return "rdno";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "rdno") return ModelKind::rdno;
  if (s == "prescribed_rdno") return ModelKind::prescribed_rdno;
  if (s == "unet") return ModelKind::unet;
  if (s == "fno") return ModelKind::fno;
  throw InvalidArgument("unknown architecture kind: " + s);
}

std::string ArchitectureSpec::text() const {
  std::ostringstream o;
  o << "kind=" << to_string(kind) << '\n';
  switch (kind) {
    case ModelKind::rdno:
      o << "rdno.activation=" << to_string(rdno.activation) << '\n'
        << "rdno.depth=" << rdno.depth << '\n'
        << "rdno.diffusion_kernel=" << rdno.diffusion_kernel << '\n'
        << "rdno.reaction_kernel=" << rdno.reaction_kernel << '\n'
        << "rdno.width=" << rdno.width << '\n';
      break;
    case ModelKind::prescribed_rdno:
    case ModelKind::unet:
      o << "unet.activation=" << to_string(unet.activation) << '\n'
        << "unet.hidden=" << unet.hidden << '\n'
        << "unet.in_channels=" << unet.in_channels << '\n'
        << "unet.kernel=" << unet.kernel << '\n'
        << "unet.levels=" << unet.levels << '\n'
        << "unet.multiplier=" << unet.multiplier << '\n'
        << "unet.out_channels=" << unet.out_channels << '\n';
      break;
    case ModelKind::fno:
      o << "fno.activation=" << to_string(fno.activation) << '\n'
        << "fno.in_channels=" << fno.in_channels << '\n'
        << "fno.layers=" << fno.layers << '\n'
        << "fno.modes=" << fno.modes << '\n'
        << "fno.out_channels=" << fno.out_channels << '\n'
        << "fno.width=" << fno.width << '\n';
      break;
  }
  return o.str();
}

ArchitectureSpec ArchitectureSpec::parse(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  ArchitectureSpec s;
  if (!kv.count("kind")) throw InvalidArgument("architecture text lacks kind");
  s.kind = parse_model_kind(kv["kind"]);
  auto geti = [&](const std::string& k, int& dst) {
    if (auto it = kv.find(k); it != kv.end()) dst = std::stoi(it->second);
  };
  auto geta = [&](const std::string& k, Activation& dst) {
    if (auto it = kv.find(k); it != kv.end()) dst = parse_activation(it->second);
  };
  geti("rdno.width", s.rdno.width);
  geti("rdno.depth", s.rdno.depth);
  geti("rdno.reaction_kernel", s.rdno.reaction_kernel);
  geti("rdno.diffusion_kernel", s.rdno.diffusion_kernel);
  geta("rdno.activation", s.rdno.activation);
  geti("unet.in_channels", s.unet.in_channels);
  geti("unet.out_channels", s.unet.out_channels);
  geti("unet.levels", s.unet.levels);
  geti("unet.hidden", s.unet.hidden);
  geti("unet.multiplier", s.unet.multiplier);
  geti("unet.kernel", s.unet.kernel);
  geta("unet.activation", s.unet.activation);
  geti("fno.in_channels", s.fno.in_channels);
  geti("fno.out_channels", s.fno.out_channels);
  geti("fno.layers", s.fno.layers);
  geti("fno.modes", s.fno.modes);
  geti("fno.width", s.fno.width);
  geta("fno.activation", s.fno.activation);
  return s;
}

void ArchitectureSpec::validate(int grid_n) const {
  auto odd = [](int k) { return k >= 1 && k % 2 == 1; };
  switch (kind) {
    case ModelKind::rdno:
      if (!odd(rdno.reaction_kernel) || !odd(rdno.diffusion_kernel))
        throw InvalidArgument("rdno: kernel sizes must be odd");
      if (rdno.width < 1 || rdno.depth < 0) throw InvalidArgument("rdno: bad width or depth");
      break;
    case ModelKind::prescribed_rdno:
    case ModelKind::unet:
      if (!odd(unet.kernel)) throw InvalidArgument("unet: kernel size must be odd");
      if (unet.levels < 1 || unet.hidden < 1 || unet.multiplier < 1)
        throw InvalidArgument("unet: levels, hidden, multiplier must be positive");
      if (grid_n > 0 && grid_n % (1 << unet.levels) != 0)
        throw InvalidArgument("unet: grid size must be divisible by 2^levels");
      break;
    case ModelKind::fno:
      if (fno.layers < 1 || fno.width < 1 || fno.modes < 1) throw InvalidArgument("fno: bad sizes");
      if (grid_n > 0 && 2 * fno.modes > grid_n) throw InvalidArgument("fno: modes must not exceed n/2");
      break;
  }
}

int ArchitectureSpec::input_channels() const {
  switch (kind) {
    case ModelKind::rdno: return 1;
    case ModelKind::prescribed_rdno: return 2;
    case ModelKind::unet: return unet.in_channels;
    case ModelKind::fno: return fno.in_channels;
  }
  return 1;
}

ArchitectureSpec ac_rdno_spec() {
  ArchitectureSpec s;
  s.kind = ModelKind::rdno;
  return s;
}

ArchitectureSpec ac_unet_spec() {
  ArchitectureSpec s;
  s.kind = ModelKind::unet;
  return s;
}

ArchitectureSpec ac_fno_spec() {
  ArchitectureSpec s;
  s.kind = ModelKind::fno;
  return s;
}

ArchitectureSpec dendrite_prescribed_spec() {
  ArchitectureSpec s;
  s.kind = ModelKind::prescribed_rdno;
  s.unet.hidden = 8;
  s.unet.levels = 4;
  s.unet.activation = Activation::tanh;
  return s;
}

}  // namespace pfno::nn
