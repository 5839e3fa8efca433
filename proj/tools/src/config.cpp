#include "pfno_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pfno/error.hpp"

namespace pfno::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : RunConfig::schema())
    if (k.key == key) return &k;
  return nullptr;
}

long parse_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InvalidArgument(fmt::format("{}: not an integer: '{}'", key, v));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw InvalidArgument(fmt::format("{}: not a finite number: '{}'", key, v));
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument(fmt::format("{}: not a boolean: '{}'", key, v));
}

}  // namespace

const std::vector<KeySpec>& RunConfig::schema() {
  using T = ValueType;
  static const std::vector<KeySpec> s = {
      {"seed", T::integer, "0"},
      {"steps", T::integer, "50"},
      {"n", T::integer, ""},
      {"stride", T::integer, "1"},
      {"threads", T::integer, "1"},
      {"plots", T::boolean, "false"},
      {"model", T::text, "ac"},
      {"ic", T::text, ""},
      {"ic.kind", T::text, "in_distribution"},
      {"ckpt", T::text, ""},
      {"dataset", T::text, ""},
      {"ref", T::text, ""},
      {"pred", T::text, ""},
      {"kappa", T::real, "-0.3"},
      {"ac.eps", T::real, "0.015625"},
      {"ac.beta", T::real, "2.001"},
      {"ac.dt", T::real, "2.44e-4"},
      {"dendrite.sigma", T::real, "0.05"},
      {"dendrite.m", T::integer, ""},
      {"dendrite.eps", T::real, ""},
      {"dendrite.tau", T::real, ""},
      {"dendrite.D", T::real, ""},
      {"dendrite.K", T::real, ""},
      {"dendrite.kappa", T::real, ""},
      {"dendrite.beta", T::real, ""},
      {"dendrite.dt", T::real, ""},
      {"dendrite.c0", T::real, ""},
      {"dendrite.length", T::real, "0.5"},
      {"dendrite.grains", T::integer, "1"},
      {"data.count", T::integer, "180"},
      {"data.variant", T::text, "in_distribution"},
      {"data.targets", T::boolean, "false"},
      {"data.states", T::integer, "500"},
      {"data.stride", T::integer, "10"},
      {"data.arrangements", T::integer, "4"},
      {"train.loss", T::text, "deepritz"},
      {"train.batch_size", T::integer, ""},
      {"train.lr", T::real, "1e-3"},
      {"train.max_epochs", T::integer, "1000"},
      {"train.window", T::integer, "50"},
      {"train.threshold", T::real, "0.003"},
      {"train.time_budget_s", T::real, "0"},
      {"gradcheck.samples", T::integer, "16"},
      {"gradcheck.tolerance", T::real, "1e-5"},
      {"arch.kind", T::text, ""},
      {"arch.rdno.width", T::integer, ""},
      {"arch.rdno.depth", T::integer, ""},
      {"arch.rdno.reaction_kernel", T::integer, ""},
      {"arch.rdno.diffusion_kernel", T::integer, ""},
      {"arch.rdno.activation", T::text, ""},
      {"arch.unet.levels", T::integer, ""},
      {"arch.unet.hidden", T::integer, ""},
      {"arch.unet.multiplier", T::integer, ""},
      {"arch.unet.kernel", T::integer, ""},
      {"arch.unet.activation", T::text, ""},
      {"arch.fno.layers", T::integer, ""},
      {"arch.fno.modes", T::integer, ""},
      {"arch.fno.width", T::integer, ""},
      {"arch.fno.activation", T::text, ""},
  };
  return s;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path.string());
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument(fmt::format("{}:{}: bad section header", path.string(), lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument(fmt::format("{}:{}: expected key=value", path.string(), lineno));
    const std::string key = trim(line.substr(0, eq));
    set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec* k = find_key(key);
  if (!k) throw InvalidArgument("unknown config key: " + key);
  switch (k->type) {
    case ValueType::integer: parse_long(key, value); break;
    case ValueType::real: parse_double(key, value); break;
    case ValueType::boolean: parse_bool(key, value); break;
    case ValueType::text: break;
  }
  values_[key] = value;
}

void RunConfig::set_pair(const std::string& pair) {
  const auto eq = pair.find('=');
  if (eq == std::string::npos) throw InvalidArgument("expected key=value, got '" + pair + "'");
  set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

bool RunConfig::has(const std::string& key) const {
  if (values_.count(key)) return true;
  const KeySpec* k = find_key(key);
  return k && !k->fallback.empty();
}

std::string RunConfig::text_value(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const KeySpec* k = find_key(key);
  if (!k) throw InvalidArgument("unknown config key: " + key);
  return k->fallback;
}

long RunConfig::integer(const std::string& key) const {
  const std::string v = text_value(key);
  if (v.empty()) throw InvalidArgument("missing value for " + key);
  return parse_long(key, v);
}

double RunConfig::real(const std::string& key) const {
  const std::string v = text_value(key);
  if (v.empty()) throw InvalidArgument("missing value for " + key);
  return parse_double(key, v);
}

bool RunConfig::flag(const std::string& key) const { return parse_bool(key, text_value(key)); }

void RunConfig::default_to(const std::string& key, const std::string& value) {
  if (!values_.count(key)) set(key, value);
}

std::string RunConfig::echo() const {
  std::ostringstream o;
  for (const auto& k : schema()) {
    const std::string v = text_value(k.key);
    if (!v.empty()) o << k.key << '=' << v << '\n';
  }
  return o.str();
}

AcParams ac_params(const RunConfig& c) {
  AcParams p;
  p.eps = c.real("ac.eps");
  p.beta = c.real("ac.beta");
  p.dt = c.real("ac.dt");
  return p;
}

DendriteParams dendrite_params(const RunConfig& c) {
  DendriteParams p = pfno::dendrite_params(c.real("dendrite.sigma"));
  auto opt = [&](const char* key, double& dst) {
    if (c.has(key)) dst = c.real(key);
  };
  if (c.has("dendrite.m")) p.m = static_cast<int>(c.integer("dendrite.m"));
  opt("dendrite.eps", p.eps);
  opt("dendrite.tau", p.tau);
  opt("dendrite.D", p.D);
  opt("dendrite.K", p.K);
  opt("dendrite.kappa", p.kappa);
  opt("dendrite.beta", p.beta);
  opt("dendrite.dt", p.dt);
  opt("dendrite.c0", p.c0_sav);
  // lambda0 is tied to D, tau and eps by the thin-interface relation.
  p.lambda0 = p.D * p.tau / (kThinInterfaceA2 * p.eps);
  return p;
}

nn::ArchitectureSpec architecture(const RunConfig& c, const std::string& model) {
  std::string kind = c.text_value("arch.kind");
  if (kind.empty()) kind = model == "dendrite" ? "prescribed_rdno" : "rdno";
  std::replace(kind.begin(), kind.end(), '-', '_');
  nn::ArchitectureSpec base;
  switch (nn::parse_model_kind(kind)) {
    case nn::ModelKind::rdno: base = nn::ac_rdno_spec(); break;
    case nn::ModelKind::unet: base = nn::ac_unet_spec(); break;
    case nn::ModelKind::fno: base = nn::ac_fno_spec(); break;
    case nn::ModelKind::prescribed_rdno: base = nn::dendrite_prescribed_spec(); break;
  }
  std::string text = base.text();
  for (const auto& k : RunConfig::schema()) {
    if (k.key.rfind("arch.", 0) != 0 || k.key == "arch.kind") continue;
    const std::string v = c.text_value(k.key);
    if (!v.empty()) text += k.key.substr(5) + "=" + v + "\n";
  }
  return nn::ArchitectureSpec::parse(text);
}

}  // namespace pfno::cli
