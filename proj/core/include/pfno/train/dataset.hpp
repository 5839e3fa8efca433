#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pfno/snapshot.hpp"
#include "pfno/trajectory.hpp"

namespace pfno {

struct Dataset {
  PhysModel model = PhysModel::ac;
  std::vector<Field2D> inputs;   // u for Allen-Cahn, phi for the dendrite model
  std::vector<Field2D> temps;    // U, dendrite only
  std::vector<Field2D> targets;  // next-step phi, data-driven training only
  Meta provenance;

  std::size_t size() const { return inputs.size(); }
  bool has_targets() const { return !targets.empty(); }
  const Grid2D& grid() const { return inputs.front().grid; }
  std::string digest() const;
};

enum class AcVariant { in_distribution, ood_disks, ood_multi_disk, ood_random };

AcVariant parse_ac_variant(const std::string& s);
std::string to_string(AcVariant v);

struct AcDatasetSpec {
  int count = 180;
  int n = 128;
  AcVariant variant = AcVariant::in_distribution;
  bool with_targets = false;
  AcParams params;
};

Dataset gen_ac_dataset(const AcDatasetSpec& spec, std::uint64_t seed);

struct DendriteDatasetSpec {
  int n = 200;
  double length = 0.5;
  std::vector<int> grain_counts{1, 2, 3};
  int arrangements = 4;
  int states = 500;  // per trajectory
  int stride = 10;   // solver steps between stored states
  bool with_targets = false;
  int threads = 1;
  DendriteParams params = dendrite_params(0.05);
};

// Uniform grain centers on [0, L)^2 with pairwise periodic distance >= min_sep.
std::vector<Point> sample_grain_centers(std::mt19937_64& rng, int count, double L, double min_sep);

// Targets are phi after one SAV step from each stored state.
Dataset gen_dendrite_dataset(const DendriteDatasetSpec& spec, std::uint64_t seed);

// One snapshot per sample plus manifest.txt with per-file digests.
void write_dataset(const Dataset& d, const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace pfno
