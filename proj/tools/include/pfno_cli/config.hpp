#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pfno/allen_cahn.hpp"
#include "pfno/dendrite.hpp"
#include "pfno/nn/architecture.hpp"

namespace pfno::cli {

enum class ValueType { integer, real, boolean, text };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string fallback;  // empty: no default
};

// Flat key=value configuration with dotted section names. Files may also use
// [section] headers, which prefix the keys that follow.
class RunConfig {
 public:
  static const std::vector<KeySpec>& schema();

  void load_file(const std::filesystem::path& path);
  // Type-checked assignment; throws InvalidArgument for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  // "key=value"
  void set_pair(const std::string& pair);

  bool has(const std::string& key) const;
  std::string text_value(const std::string& key) const;
  long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;

  // Schema default unless already set.
  void default_to(const std::string& key, const std::string& value);

  // Resolved key=value lines, sorted.
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

AcParams ac_params(const RunConfig& c);
DendriteParams dendrite_params(const RunConfig& c);
// Base architecture for the model with arch.* overrides applied.
nn::ArchitectureSpec architecture(const RunConfig& c, const std::string& model);

}  // namespace pfno::cli
