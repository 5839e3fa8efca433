// Acceptance suite. Prints one PASS/FAIL line per criterion; exits nonzero on
// any failure. Arguments select criteria by number (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pfno/allen_cahn.hpp"
#include "pfno/dendrite.hpp"
#include "pfno/metrics/ivantsov.hpp"
#include "pfno/metrics/level_set.hpp"
#include "pfno/metrics/report.hpp"
#include "pfno/metrics/tip.hpp"
#include "pfno/nn/grad_check.hpp"
#include "pfno/nn/models.hpp"
#include "pfno/snapshot.hpp"
#include "pfno/train/dataset.hpp"
#include "pfno/train/losses.hpp"
#include "pfno/train/rollout.hpp"
#include "pfno/train/trainer.hpp"
#include "pfno_cli/run_command.hpp"

namespace fs = std::filesystem;
using namespace pfno;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs_diff(const Field2D& a, const Field2D& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.v.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

// ---- 1: +-1 are fixed points of the splitting step.
Outcome equilibria() {
  const auto t0 = Clock::now();
  const AcParams p;
  double worst = 0;
  for (double c : {1.0, -1.0}) {
    Field2D u(make_grid(128), c);
    for (int k = 0; k < 10; ++k) {
      Field2D next = ac_split_step(u, p);
      worst = std::max(worst, max_abs_diff(next, u));
      u = std::move(next);
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 1.0, fmt("max step change %.2e, %.2f s", worst, t)};
}

// ---- 2: energy is non-increasing, also with a 100x step.
Outcome dissipation() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const Grid2D g = make_grid(128);
  double worst_rise = -1e300;
  for (int ic = 0; ic < 10; ++ic) {
    const Field2D u0 = ic_perturbed_disk(g, sample_disk_spec(rng, 5, 0.12, 0.3, 0.1, 0.5), 1.0 / 64);
    for (double scale : {1.0, 100.0}) {
      AcParams p;
      p.dt *= scale;
      Field2D u = u0;
      double e = ac_energy(u, p.eps);
      for (int k = 0; k < 50; ++k) {
        u = ac_split_step(u, p);
        const double e1 = ac_energy(u, p.eps);
        worst_rise = std::max(worst_rise, e1 - e);
        e = e1;
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst_rise <= 1e-10 && t < 10.0, fmt("largest step change dE %.2e, %.2f s", worst_rise, t)};
}

// ---- 3: a shrinking disk follows r^2 = r0^2 - 2t.
Outcome curvature_law() {
  const auto t0 = Clock::now();
  const double r0 = 0.3;
  AcParams p;
  p.eps = 1.0 / 64;
  // Small steps keep the lag from the stabilization term well below the tolerance.
  p.dt = p.eps * p.eps / 400;
  PerturbedDiskSpec s;
  s.r = r0;
  Field2D u = ic_perturbed_disk(make_grid(128), s, p.eps);
  auto radius = [](const Field2D& f) {
    double area = 0;
    for (const auto& line : zero_level_set(f).lines) area += std::abs(polyline_area(line));
    return std::sqrt(area / std::numbers::pi);
  };
  double worst = 0, r = radius(u), t = 0;
  int samples = 0;
  for (int k = 1; r > 0.15; ++k) {
    u = ac_split_step(u, p);
    t = k * p.dt;
    if (k % 100) continue;
    r = radius(u);
    if (r < 0.15) break;
    const double law = r0 * r0 - 2 * t;
    worst = std::max(worst, std::abs(r * r - law) / law);
    ++samples;
  }
  const double sec = seconds_since(t0);
  return {worst <= 0.03 && samples > 0 && sec < 30.0,
          fmt("max rel. error of r^2 %.2f%% over %d samples up to t=%.4f, %.1f s", 100 * worst, samples, t, sec)};
}

// ---- 4: diffuse perimeter of a tanh circle.
Outcome perimeter_oracle() {
  const double eps = 1.0 / 64;
  PerturbedDiskSpec s;
  s.r = 0.25;
  const Field2D u = ic_perturbed_disk(make_grid(256), s, eps);
  const double expect = 2 * std::sqrt(2.0) / 3 * 2 * std::numbers::pi * 0.25;
  const double got = perimeter_epsilon(u, eps);
  const double rel = std::abs(got - expect) / expect;
  return {rel < 0.01, fmt("P=%.6f expected %.6f (%.3f%%)", got, expect, 100 * rel)};
}

// ---- 5: Ivantsov Peclet number.
Outcome ivantsov() {
  const auto t0 = Clock::now();
  const double pe = ivantsov_peclet(-0.3);
  const double us = 1e6 * seconds_since(t0);
  const double rel = std::abs(pe - 4.48e-2) / 4.48e-2;
  return {rel < 0.02 && us < 1000.0, fmt("Pe=%.5e (%.2f%%), %.0f us", pe, 100 * rel, us)};
}

// ---- 6: gradients of layers, architectures and losses.
nn::Tensor4 random_tensor(int n, int c, int h, int w, std::uint64_t seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  nn::Tensor4 t(n, c, h, w);
  for (double& x : t.v) x = d(rng);
  return t;
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

Field2D random_field(const Grid2D& g, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Field2D f(g, 0.0);
  for (double& x : f.v) x = d(rng);
  return f;
}

Field2D axpy(const Field2D& x, double a, const Field2D& y) {
  Field2D out = x;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += a * y.v[k];
  return out;
}

Outcome gradient_suite() {
  using namespace nn;
  const auto t0 = Clock::now();
  std::map<std::string, double> err;
  auto layer = [&](const std::string& name, const ForwardFn& f, const BackwardFn& b, const ModelWeights& w,
                   const Tensor4& x) { err[name] = grad_check(f, b, w, x, 3).max_rel_error; };

  const Tensor4 x = random_tensor(2, 2, 8, 8, 22);
  for (int stride : {1, 2}) {
    const ConvShape s{2, 3, 3, stride};
    ModelWeights w;
    w.tensors["k"] = {{3, 2, 3, 3}, random_vec(54, 23)};
    w.tensors["b"] = {{3}, random_vec(3, 24)};
    layer("conv/s" + std::to_string(stride),
          [s](const ModelWeights& w, const Tensor4& x) { return conv2d_periodic(x, w.ptr("k"), w.ptr("b"), s); },
          [s](const ModelWeights& w, const Tensor4& x, const Tensor4& dy, ModelWeights& g) {
            Tensor4 dx;
            conv2d_periodic_backward(x, w.ptr("k"), s, dy, &dx, g.ptr("k"), g.ptr("b"));
            return dx;
          },
          w, x);
  }
  {
    const ConvShape s{2, 3, 3, 2};
    ModelWeights w;
    w.tensors["k"] = {{2, 3, 3, 3}, random_vec(54, 25)};
    w.tensors["b"] = {{3}, random_vec(3, 26)};
    layer("conv_transpose",
          [s](const ModelWeights& w, const Tensor4& x) {
            return conv_transpose2d_periodic(x, w.ptr("k"), w.ptr("b"), s);
          },
          [s](const ModelWeights& w, const Tensor4& x, const Tensor4& dy, ModelWeights& g) {
            Tensor4 dx;
            conv_transpose2d_periodic_backward(x, w.ptr("k"), s, dy, &dx, g.ptr("k"), g.ptr("b"));
            return dx;
          },
          w, random_tensor(1, 2, 4, 4, 27));
  }
  {
    const SpectralShape s{2, 3, 3};
    ModelWeights w;
    w.tensors["wr"] = {{2, 3, 5, 3}, random_vec(s.weights_per_part(), 28)};
    w.tensors["wi"] = {{2, 3, 5, 3}, random_vec(s.weights_per_part(), 29)};
    layer("spectral_conv",
          [s](const ModelWeights& w, const Tensor4& x) { return spectral_conv(x, w.ptr("wr"), w.ptr("wi"), s); },
          [s](const ModelWeights& w, const Tensor4& x, const Tensor4& dy, ModelWeights& g) {
            Tensor4 dx;
            spectral_conv_backward(x, w.ptr("wr"), w.ptr("wi"), s, dy, &dx, g.ptr("wr"), g.ptr("wi"));
            return dx;
          },
          w, x);
  }
  for (Activation a : {Activation::identity, Activation::tanh, Activation::gelu, Activation::relu}) {
    ModelWeights w;
    w.tensors["unused"] = {{1}, {0.0}};
    layer("act/" + to_string(a), [a](const ModelWeights&, const Tensor4& x) { return activate(x, a); },
          [a](const ModelWeights&, const Tensor4& x, const Tensor4& dy, ModelWeights&) {
            return activate_backward(x, a, dy);
          },
          w, x);
  }

  // The paper configurations need at least 16^2 (UNet) or 40^2 (FNO); these
  // keep every block of each architecture at 8^2.
  ArchitectureSpec rdno, unet, fno;
  rdno.kind = ModelKind::rdno;
  rdno.rdno = {4, 2, 3, 5, Activation::tanh};
  unet.kind = ModelKind::unet;
  unet.unet = {1, 1, 2, 2, 2, 3, Activation::gelu};
  fno.kind = ModelKind::fno;
  fno.fno = {1, 1, 2, 3, 4, Activation::gelu};
  ArchitectureSpec prescribed = unet;
  prescribed.kind = ModelKind::prescribed_rdno;
  prescribed.unet.activation = Activation::tanh;
  DendriteParams toy = dendrite_params(0.05);
  toy.eps = 0.2;
  toy.lambda0 = 1.0;
  toy.tau = 1.0;
  toy.dt = 0.01;
  for (const auto& spec : {rdno, unet, fno, prescribed}) {
    std::mt19937_64 rng(31);
    const Network net(spec, toy);
    const auto w = init_weights(spec, rng);
    err["arch/" + to_string(spec.kind)] =
        grad_check(net, w, random_tensor(2, spec.input_channels(), 8, 8, 32, 0.9), 5).max_rel_error;
  }

  // Losses: central directional derivatives along random directions.
  AcParams ac;
  ac.eps = 1.0 / 8;
  ac.dt = 1e-3;
  DendriteParams dp = dendrite_params(0.05);
  dp.eps = 0.1;
  dp.lambda0 = 2.0;
  dp.tau = 1.0;
  dp.dt = 0.01;
  const Grid2D g = make_grid(8);
  const Field2D phi_n = random_field(g, 4, -0.8, 0.8), U_n = random_field(g, 5, -0.3, 0.3);
  const Field2D pred = axpy(phi_n, 1.0, random_field(g, 6, -0.1, 0.1)), target = random_field(g, 7, -1, 1);
  auto directional = [&](const std::string& name, const std::function<double(const Field2D&)>& L,
                         const Field2D& grad) {
    double worst = 0;
    for (int trial = 0; trial < 3; ++trial) {
      const Field2D d = random_field(g, 50 + trial, -1, 1);
      const double h = 1e-5;
      const double fd = (L(axpy(pred, h, d)) - L(axpy(pred, -h, d))) / (2 * h);
      double an = 0;
      for (std::size_t k = 0; k < d.v.size(); ++k) an += grad.v[k] * d.v[k];
      worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-300));
    }
    err["loss/" + name] = worst;
  };
  directional("deepritz_ac", [&](const Field2D& x) { return loss_deepritz_ac(x, phi_n, ac); },
              loss_deepritz_ac_grad(pred, phi_n, ac).grad);
  directional("deepritz_dendrite", [&](const Field2D& x) { return loss_deepritz_dendrite(x, phi_n, U_n, dp); },
              loss_deepritz_dendrite_grad(pred, phi_n, U_n, dp).grad);
  directional("data", [&](const Field2D& x) { return loss_data(x, target); }, loss_data_grad(pred, target).grad);
  directional("residual", [&](const Field2D& x) { return loss_scheme_residual(x, phi_n, U_n, dp); },
              loss_scheme_residual_grad(pred, phi_n, U_n, dp).grad);

  const auto worst = std::max_element(err.begin(), err.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  const double t = seconds_since(t0);
  return {worst->second < 1e-5 && t < 60.0,
          fmt("%zu checks, worst %s %.2e, %.2f s", err.size(), worst->first.c_str(), worst->second, t)};
}

// ---- 7: the splitting solution minimizes the DeepRitz functional.
Outcome minimizer() {
  const auto t0 = Clock::now();
  const AcParams p;
  AcDatasetSpec ds;
  ds.count = 20;
  ds.params = p;
  const Dataset d = gen_ac_dataset(ds, 77);
  int violations = 0, trials = 0;
  double tightest = 1e300;
  for (std::size_t s = 0; s < d.size(); ++s) {
    const Field2D& u = d.inputs[s];
    const Field2D star = ac_split_step(u, p);
    const double best = loss_deepritz_ac(star, u, p);
    for (int k = 0; k < 100; ++k, ++trials) {
      const double amp = std::pow(10.0, -3.0 + 2.0 * k / 99.0);
      const double l = loss_deepritz_ac(axpy(star, 1.0, random_field(u.grid, 1000 * s + k, -amp, amp)), u, p);
      tightest = std::min(tightest, l - best);
      if (l < best) ++violations;
    }
  }
  const double t = seconds_since(t0);
  return {violations == 0 && t < 60.0,
          fmt("%d/%d violations, smallest gap %.3e, %.1f s", violations, trials, tightest, t)};
}

// ---- 8: desk-scale DeepRitz training against a data-driven baseline.
struct RolloutScore {
  double perimeter_err = 0;
  int decreasing = 0, steps = 0;
};

RolloutScore score(const nn::Network& net, const nn::ModelWeights& w, const Dataset& ics, const Physics& phys) {
  RolloutScore s;
  RolloutOptions o;
  o.steps = 50;
  for (std::size_t k = 0; k < ics.size(); ++k) {
    State ic;
    ic.phi = ics.inputs[k];
    const auto pred = rollout(net, w, ic, phys, o);
    const auto ref = reference_rollout(ic, phys, o);
    s.perimeter_err += error_metrics(pred, ref, PhysModel::ac).mean_rel_err_perimeter / ics.size();
    for (std::size_t i = 1; i < pred.rows.size(); ++i, ++s.steps)
      if (pred.rows[i].energy < pred.rows[i - 1].energy) ++s.decreasing;
  }
  return s;
}

Outcome desk_training() {
  // eps = 1/64 does not resolve on 64^2 (eps >= 2h); 1/32 is the finest that does.
  Physics phys;
  phys.ac.eps = 1.0 / 32;
  AcDatasetSpec ds;
  ds.count = 32;
  ds.n = 64;
  ds.params = phys.ac;
  ds.with_targets = true;
  const Dataset train_set = gen_ac_dataset(ds, 1);
  ds.count = 10;
  ds.with_targets = false;
  const Dataset in_range = gen_ac_dataset(ds, 99);
  ds.variant = AcVariant::ood_random;
  const Dataset ood = gen_ac_dataset(ds, 99);

  const auto spec = nn::ac_rdno_spec();
  const nn::Network net(spec);
  std::mt19937_64 rng(7);
  const auto init = nn::init_weights(spec, rng);
  TrainConfig tc;
  tc.batch_size = 8;
  tc.max_epochs = 400;
  tc.time_budget_s = 420;
  // The DeepRitz loss plateaus near E(u_{n+1}), not zero, so the 3 permille
  // rule fires after ~100 epochs here; run the fixed budget instead.
  tc.threshold = 1e-12;

  const auto t0 = Clock::now();
  tc.loss = LossKind::deepritz;
  const TrainResult ritz = train(net, init, train_set, tc, phys);
  const double t_ritz = seconds_since(t0);
  const auto t1 = Clock::now();
  tc.loss = LossKind::data;
  const TrainResult data = train(net, init, train_set, tc, phys);
  const double t_data = seconds_since(t1);

  const RolloutScore in = score(net, ritz.weights, in_range, phys);
  const RolloutScore ritz_ood = score(net, ritz.weights, ood, phys);
  const RolloutScore data_ood = score(net, data.weights, ood, phys);
  const double frac = static_cast<double>(in.decreasing) / in.steps;
  const bool ok = !ritz.diverged() && !data.diverged() && t_ritz < 900 && in.perimeter_err < 0.02 && frac >= 0.95 &&
                  data_ood.perimeter_err > ritz_ood.perimeter_err;
  return {ok, fmt("perimeter err %.3f%%, E decreasing %.1f%%, OOD deepritz %.2f%% vs data %.2f%%, "
                  "training %.0f s + %.0f s (%zu, %zu epochs)",
                  100 * in.perimeter_err, 100 * frac, 100 * ritz_ood.perimeter_err, 100 * data_ood.perimeter_err,
                  t_ritz, t_data, ritz.history.size(), data.history.size())};
}

// ---- 9: SAV reference run of a single grain.
Outcome sav_run() {
  const auto t0 = Clock::now();
  const DendriteParams p = dendrite_params(0.05);
  const Grid2D g = make_grid(200, 0.5);
  auto [phi, U] = ic_dendrite(g, {{0.25, 0.25}}, p);
  SavState s = sav_init(std::move(phi), std::move(U), p);
  const int steps = static_cast<int>(std::lround(100.0 / p.dt));
  const int stride = 25;
  std::vector<Field2D> phis{s.phi};
  std::vector<double> times{0.0};
  double worst_q_rise = -1e300, fs = solid_fraction(s.phi);
  int fs_violations = 0;
  for (int k = 1; k <= steps; ++k) {
    SavState next = sav_step(s, p);
    worst_q_rise = std::max(worst_q_rise, next.q - s.q);
    const double f = solid_fraction(next.phi);
    if (!(f > fs)) ++fs_violations;
    fs = f;
    s = std::move(next);
    if (k % stride == 0) {
      phis.push_back(s.phi);
      times.push_back(k * p.dt);
    }
  }
  TipOptions opt;
  opt.diffusivity = p.D;
  opt.fit_radius = false;
  const auto tips = tip_track(phis, times, TipDirection::plus_x, opt);
  const SteadyTip st = steady_state(tips, 90.0, 20);
  const double rel = std::abs(st.velocity - 1.29e-3) / 1.29e-3;
  const double t = seconds_since(t0);
  return {worst_q_rise <= 1e-8 && fs_violations == 0 && rel <= 0.25,
          fmt("max q rise %.2e, %d solid-fraction non-increases, V_tip %.4e (%.1f%%), %.0f s", worst_q_rise,
              fs_violations, st.velocity, 100 * rel, t)};
}

// ---- 10: parameter counts of the paper configurations.
Outcome parameter_counts() {
  std::mt19937_64 rng(0);
  const std::size_t rdno = nn::init_weights(nn::ac_rdno_spec(), rng).parameter_count();
  const std::size_t unet = nn::init_weights(nn::ac_unet_spec(), rng).parameter_count();
  const std::size_t fno = nn::init_weights(nn::ac_fno_spec(), rng).parameter_count();
  return {rdno == 31522 && unet == 37021 && fno == 82174,
          fmt("RDNO %zu/31522, UNet %zu/37021, FNO %zu/82174", rdno, unet, fno)};
}

// ---- 11: bitwise round trips and reproducible runs.
std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string body = ss.str();
    // The recorded command line names the output directory.
    if (e.path().filename() == "run_manifest.txt") {
      std::string kept, line;
      std::istringstream lines(body);
      while (std::getline(lines, line))
        if (line.rfind("command=", 0) != 0) kept += line + "\n";
      body = kept;
    }
    out[fs::relative(e.path(), dir).string()] = body;
  }
  return out;
}

Outcome determinism() {
  std::vector<std::string> failures;
  const fs::path root = fs::temp_directory_path() / "pfno_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  std::mt19937_64 rng(11);
  std::vector<Field2D> channels{random_field(make_grid(64), 1, -1, 1), random_field(make_grid(64), 2, -1e-300, 1e300)};
  channels[0].v[3] = -0.0;
  snapshot_write(channels, root / "x.snap");
  const auto back = snapshot_read(root / "x.snap");
  bool snap_ok = back.size() == channels.size();
  for (std::size_t c = 0; snap_ok && c < back.size(); ++c)
    snap_ok = std::memcmp(back[c].v.data(), channels[c].v.data(), channels[c].v.size() * sizeof(double)) == 0;
  snap_ok = snap_ok && snapshot_bytes(back) == read_file(root / "x.snap");
  if (!snap_ok) failures.push_back("snapshot");

  bool ckpt_ok = true;
  for (const auto& spec : {nn::ac_rdno_spec(), nn::ac_unet_spec(), nn::ac_fno_spec(), nn::dendrite_prescribed_spec()}) {
    const auto w = nn::init_weights(spec, rng);
    nn::checkpoint_write(w, root / "w.ckpt");
    const auto r = nn::checkpoint_read(root / "w.ckpt", spec);
    ckpt_ok = ckpt_ok && nn::checkpoint_bytes(r) == read_file(root / "w.ckpt");
    for (const auto& [name, t] : w.tensors)
      ckpt_ok = ckpt_ok && r.tensors.count(name) &&
                std::memcmp(r.tensors.at(name).v.data(), t.v.data(), t.v.size() * sizeof(double)) == 0;
  }
  if (!ckpt_ok) failures.push_back("checkpoint");

  auto run_twice = [&](const std::string& label, const std::vector<std::string>& args,
                       const std::vector<std::string>& compare) {
    std::vector<std::map<std::string, std::string>> trees;
    for (const char* side : {"a", "b"}) {
      auto a = args;
      a.insert(a.end(), {"--threads", "1", "--out", (root / (label + side)).string()});
      std::ostringstream o, e;
      if (cli::run_command(a, o, e) != cli::kExitOk) {
        failures.push_back(label + " failed: " + e.str());
        return;
      }
      auto t = tree(root / (label + side));
      if (!compare.empty())
        std::erase_if(t, [&](const auto& kv) {
          return std::find(compare.begin(), compare.end(), kv.first) == compare.end();
        });
      trees.push_back(std::move(t));
    }
    if (trees[0] != trees[1] || trees[0].empty()) failures.push_back(label);
  };
  run_twice("simulate-ac", {"simulate-ac", "--n", "64", "--steps", "20", "--seed", "5", "--set", "ac.eps=0.03125"}, {});
  run_twice("simulate-dendrite",
            {"simulate-dendrite", "--n", "64", "--length", "0.16", "--steps", "10", "--stride", "5", "--seed", "5"}, {});
  run_twice("gen-data", {"gen-data", "--model", "ac", "--n", "32", "--count", "4", "--seed", "5", "--set",
                         "ac.eps=0.0625"},
            {});
  // loss_history.csv carries wall-clock seconds; the weights must match.
  run_twice("train",
            {"train", "--dataset", (root / "gen-dataa").string(), "--arch", "rdno", "--epochs", "3", "--batch", "2",
             "--seed", "5", "--set", "ac.eps=0.0625", "--set", "arch.rdno.diffusion_kernel=5"},
            {"model.ckpt"});
  fs::remove_all(root);

  std::string detail = failures.empty() ? "snapshot, checkpoint and 4 CLI runs reproduced bitwise" : "mismatch:";
  for (const auto& f : failures) detail += " " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, equilibria},   {2, dissipation},   {3, curvature_law},    {4, perimeter_oracle},
      {5, ivantsov},     {6, gradient_suite}, {7, minimizer},        {8, desk_training},
      {9, sav_run},      {10, parameter_counts}, {11, determinism}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
