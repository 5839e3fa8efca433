#include "pfno/train/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "pfno/digest.hpp"
#include "pfno/error.hpp"

namespace pfno {

std::string Dataset::digest() const {
  std::string bytes;
  for (std::size_t k = 0; k < size(); ++k) {
    std::vector<Field2D> ch{inputs[k]};
    if (!temps.empty()) ch.push_back(temps[k]);
    if (!targets.empty()) ch.push_back(targets[k]);
    const auto b = snapshot_bytes(ch);
    bytes.append(b.begin(), b.end());
  }
  return sha256_hex(bytes);
}

AcVariant parse_ac_variant(const std::string& s) {
  if (s == "in_distribution") return AcVariant::in_distribution;
  if (s == "ood_disks") return AcVariant::ood_disks;
  if (s == "ood_multi_disk") return AcVariant::ood_multi_disk;
  if (s == "ood_random") return AcVariant::ood_random;
  throw InvalidArgument("unknown dataset variant: " + s);
}

std::string to_string(AcVariant v) {
  switch (v) {
    case AcVariant::in_distribution: return "in_distribution";
    case AcVariant::ood_disks: return "ood_disks";
    case AcVariant::ood_multi_disk: return "ood_multi_disk";
    case AcVariant::ood_random: return "ood_random";
  }
  return "?";
}

Dataset gen_ac_dataset(const AcDatasetSpec& spec, std::uint64_t seed) {
  if (spec.count < 1) throw InvalidArgument("gen_ac_dataset: count must be positive");
  const Grid2D g = make_grid(spec.n);
  validate(spec.params, g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Dataset d;
  d.model = PhysModel::ac;
  for (int k = 0; k < spec.count; ++k) {
    switch (spec.variant) {
      case AcVariant::in_distribution:
        d.inputs.push_back(ic_perturbed_disk(g, sample_disk_spec(rng, 5, 0.12, 0.3, 0.1, 0.5), spec.params.eps));
        break;
      case AcVariant::ood_disks:
        d.inputs.push_back(ic_perturbed_disk(g, sample_disk_spec(rng, 8, 0.06, 0.375, 0.09, 0.55), spec.params.eps));
        break;
      case AcVariant::ood_multi_disk: {
        std::vector<Point> c;
        std::vector<double> r;
        for (int i = 0; i < 3; ++i) {
          const double x = u01(rng), y = u01(rng);
          c.push_back({x, y});
          r.push_back(0.06 + 0.14 * u01(rng));
        }
        d.inputs.push_back(ic_multi_disk(g, c, r, spec.params.eps));
        break;
      }
      case AcVariant::ood_random:
        d.inputs.push_back(ic_random_field(rng, g));
        break;
    }
    if (spec.with_targets) d.targets.push_back(ac_split_step(d.inputs.back(), spec.params));
  }
  d.provenance = {{"generator", "ac"},
                  {"variant", to_string(spec.variant)},
                  {"seed", std::to_string(seed)},
                  {"count", std::to_string(spec.count)},
                  {"n", std::to_string(spec.n)},
                  {"eps", fmt::format("{:.17g}", spec.params.eps)},
                  {"beta", fmt::format("{:.17g}", spec.params.beta)},
                  {"dt", fmt::format("{:.17g}", spec.params.dt)}};
  return d;
}

std::vector<Point> sample_grain_centers(std::mt19937_64& rng, int count, double L, double min_sep) {
  std::uniform_real_distribution<double> u(0.0, L);
  std::vector<Point> c;
  for (int tries = 0; static_cast<int>(c.size()) < count; ++tries) {
    if (tries > 10000) throw InvalidArgument("cannot place grains at the requested separation");
    const Point p{u(rng), u(rng)};
    bool ok = true;
    for (const auto& q : c) ok = ok && periodic_distance(p.x, p.y, q.x, q.y, L) >= min_sep;
    if (ok) c.push_back(p);
  }
  return c;
}

namespace {

struct Trajectory {
  std::vector<Field2D> phi, U, target;
};

Trajectory run_trajectory(const Grid2D& g, const std::vector<Point>& centers, const DendriteDatasetSpec& spec) {
  auto [phi, U] = ic_dendrite(g, centers, spec.params);
  SavState s = sav_init(std::move(phi), std::move(U), spec.params);
  Trajectory t;
  for (int k = 0; k < spec.states; ++k) {
    t.phi.push_back(s.phi);
    t.U.push_back(s.U);
    for (int j = 0; j < spec.stride; ++j) {
      s = sav_step(s, spec.params);
      if (j == 0 && spec.with_targets) t.target.push_back(s.phi);
    }
  }
  return t;
}

}  // namespace

Dataset gen_dendrite_dataset(const DendriteDatasetSpec& spec, std::uint64_t seed) {
  if (spec.states < 1 || spec.stride < 1 || spec.arrangements < 1)
    throw InvalidArgument("gen_dendrite_dataset: states, stride and arrangements must be positive");
  validate(spec.params);
  const Grid2D g = make_grid(spec.n, spec.length);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Point>> ics;
  for (int count : spec.grain_counts) {
    if (count < 1 || count > 3) throw InvalidArgument("gen_dendrite_dataset: grain counts must lie in {1,2,3}");
    for (int a = 0; a < spec.arrangements; ++a)
      ics.push_back(sample_grain_centers(rng, count, spec.length, 20.0 * spec.params.eps));
  }
  std::vector<Trajectory> trajs(ics.size());
  const int workers = std::max(1, std::min<int>(spec.threads, static_cast<int>(ics.size())));
  std::vector<std::exception_ptr> errors(ics.size());
  auto work = [&](int w) {
    for (std::size_t k = w; k < ics.size(); k += workers) {
      try {
        trajs[k] = run_trajectory(g, ics[k], spec);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Dataset d;
  d.model = PhysModel::dendrite;
  std::ostringstream arr;
  for (std::size_t k = 0; k < ics.size(); ++k) {
    for (auto& f : trajs[k].phi) d.inputs.push_back(std::move(f));
    for (auto& f : trajs[k].U) d.temps.push_back(std::move(f));
    for (auto& f : trajs[k].target) d.targets.push_back(std::move(f));
    arr << (k ? ";" : "");
    for (std::size_t i = 0; i < ics[k].size(); ++i)
      arr << (i ? "|" : "") << fmt::format("{:.6f},{:.6f}", ics[k][i].x, ics[k][i].y);
  }
  d.provenance = {{"generator", "dendrite"},
                  {"seed", std::to_string(seed)},
                  {"n", std::to_string(spec.n)},
                  {"length", fmt::format("{:.17g}", spec.length)},
                  {"sigma", fmt::format("{:.17g}", spec.params.sigma)},
                  {"states", std::to_string(spec.states)},
                  {"stride", std::to_string(spec.stride)},
                  {"arrangements", arr.str()}};
  return d;
}

void write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  if (d.size() == 0) throw InvalidArgument("write_dataset: empty dataset");
  std::filesystem::create_directories(dir);
  std::ostringstream man;
  man << "model=" << (d.model == PhysModel::ac ? "ac" : "dendrite") << "\n";
  man << "count=" << d.size() << "\n";
  man << "length=" << fmt::format("{:.17g}", d.grid().length) << "\n";
  man << "has_temps=" << (d.temps.empty() ? 0 : 1) << "\n";
  man << "has_targets=" << (d.has_targets() ? 1 : 0) << "\n";
  man << "digest=" << d.digest() << "\n";
  for (const auto& [k, v] : d.provenance) man << "provenance." << k << "=" << v << "\n";
  for (std::size_t k = 0; k < d.size(); ++k) {
    std::vector<Field2D> ch{d.inputs[k]};
    if (!d.temps.empty()) ch.push_back(d.temps[k]);
    if (d.has_targets()) ch.push_back(d.targets[k]);
    const auto bytes = snapshot_bytes(ch);
    const std::string name = fmt::format("sample_{:06d}.snap", k);
    write_file(dir / name, bytes);
    man << "sample " << name << " " << sha256_hex(std::string_view(bytes.data(), bytes.size())) << "\n";
  }
  const std::string s = man.str();
  write_file(dir / "manifest.txt", std::vector<char>(s.begin(), s.end()));
}

Dataset read_dataset(const std::filesystem::path& dir) {
  const auto mpath = dir / "manifest.txt";
  if (!std::filesystem::exists(mpath)) throw InvalidArgument("dataset manifest not found: " + mpath.string());
  std::ifstream in(mpath);
  Meta head;
  std::vector<std::pair<std::string, std::string>> files;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("sample ", 0) == 0) {
      std::istringstream ls(line.substr(7));
      std::string name, hex;
      ls >> name >> hex;
      files.emplace_back(name, hex);
    } else if (auto eq = line.find('='); eq != std::string::npos) {
      head[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  if (files.empty()) throw FormatError("dataset manifest lists no samples");
  Dataset d;
  d.model = head["model"] == "dendrite" ? PhysModel::dendrite : PhysModel::ac;
  const double L = head.count("length") ? std::stod(head["length"]) : 1.0;
  const bool temps = head["has_temps"] == "1", targets = head["has_targets"] == "1";
  for (const auto& [k, v] : head)
    if (k.rfind("provenance.", 0) == 0) d.provenance[k.substr(11)] = v;
  for (const auto& [name, hex] : files) {
    const auto bytes = read_file(dir / name);
    if (sha256_hex(std::string_view(bytes.data(), bytes.size())) != hex)
      throw FormatError("dataset sample digest mismatch: " + name);
    auto ch = snapshot_parse(bytes, L);
    const std::size_t want = 1 + (temps ? 1 : 0) + (targets ? 1 : 0);
    if (ch.size() != want) throw FormatError("dataset sample has wrong channel count: " + name);
    std::size_t c = 0;
    d.inputs.push_back(std::move(ch[c++]));
    if (temps) d.temps.push_back(std::move(ch[c++]));
    if (targets) d.targets.push_back(std::move(ch[c++]));
  }
  if (head.count("digest") && head["digest"] != d.digest()) throw FormatError("dataset digest mismatch");
  return d;
}

}  // namespace pfno
