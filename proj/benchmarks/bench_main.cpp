#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pfno/allen_cahn.hpp"
#include "pfno/dendrite.hpp"
#include "pfno/metrics/level_set.hpp"
#include "pfno/nn/models.hpp"
#include "pfno/spectral.hpp"
#include "pfno/train/losses.hpp"

using namespace pfno;

namespace {

Field2D disk(int n, double eps) {
  PerturbedDiskSpec s;
  s.r = 0.25;
  return ic_perturbed_disk(make_grid(n), s, eps);
}

}  // namespace

static void BM_SpectralLaplacian(benchmark::State& state) {
  const Field2D u = disk(static_cast<int>(state.range(0)), 1.0 / 64);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_laplacian(u));
}
BENCHMARK(BM_SpectralLaplacian)->Arg(64)->Arg(128)->Arg(256);

static void BM_AcSplitStep(benchmark::State& state) {
  AcParams p;
  const Field2D u = disk(static_cast<int>(state.range(0)), p.eps);
  for (auto _ : state) benchmark::DoNotOptimize(ac_split_step(u, p));
}
BENCHMARK(BM_AcSplitStep)->Arg(128)->Arg(256);

static void BM_SavStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DendriteParams p = dendrite_params(0.05);
  const Grid2D g = make_grid(n, 0.5);
  auto [phi, U] = ic_dendrite(g, {{0.25, 0.25}}, p);
  const SavState s = sav_init(std::move(phi), std::move(U), p);
  for (auto _ : state) benchmark::DoNotOptimize(sav_step(s, p));
}
BENCHMARK(BM_SavStep)->Arg(100)->Arg(200);

static void BM_Conv2d(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const nn::ConvShape s{10, 10, k, 1};
  nn::Tensor4 x(1, 10, 64, 64, 0.5);
  std::vector<double> w(static_cast<std::size_t>(s.in) * s.out * k * k, 0.01), b(s.out, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(nn::conv2d_periodic(x, w.data(), b.data(), s));
}
BENCHMARK(BM_Conv2d)->Arg(3)->Arg(17);

static void BM_RdnoForward(benchmark::State& state) {
  const auto spec = nn::ac_rdno_spec();
  std::mt19937_64 rng(0);
  const auto w = nn::init_weights(spec, rng);
  const nn::Network net(spec);
  const int n = static_cast<int>(state.range(0));
  nn::Tensor4 x(1, 1, n, n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(w, x, nullptr));
}
BENCHMARK(BM_RdnoForward)->Arg(64)->Arg(128);

static void BM_RdnoBackward(benchmark::State& state) {
  const auto spec = nn::ac_rdno_spec();
  std::mt19937_64 rng(0);
  const auto w = nn::init_weights(spec, rng);
  const nn::Network net(spec);
  nn::Tensor4 x(1, 1, 64, 64, 0.3);
  nn::Cache c;
  const nn::Tensor4 y = net.forward(w, x, &c);
  for (auto _ : state) {
    auto g = w.zeros_like();
    benchmark::DoNotOptimize(net.backward(w, c, y, g));
  }
}
BENCHMARK(BM_RdnoBackward);

static void BM_DeepRitzLossGrad(benchmark::State& state) {
  AcParams p;
  p.eps = 1.0 / 32;
  const Field2D u = disk(64, p.eps);
  for (auto _ : state) benchmark::DoNotOptimize(loss_deepritz_ac_grad(u, u, p));
}
BENCHMARK(BM_DeepRitzLossGrad);

static void BM_ZeroLevelSet(benchmark::State& state) {
  const Field2D u = disk(static_cast<int>(state.range(0)), 1.0 / 64);
  for (auto _ : state) benchmark::DoNotOptimize(zero_level_set(u));
}
BENCHMARK(BM_ZeroLevelSet)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
