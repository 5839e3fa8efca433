#include "pfno/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pfno::nn {

namespace {

double probe(const Tensor4& y, const Tensor4& cot) {
  double s = 0.0;
  for (std::size_t k = 0; k < y.v.size(); ++k) s += y.v[k] * cot.v[k];
  return s;
}

std::vector<std::size_t> pick(std::size_t n, int samples, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (static_cast<int>(n) > samples) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(samples);
  }
  return idx;
}

}  // namespace

GradCheckResult grad_check(const ForwardFn& f, const BackwardFn& b, const ModelWeights& w, const Tensor4& x,
                           std::uint64_t seed, int samples, double step) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const Tensor4 y0 = f(w, x);
  Tensor4 cot(y0.n, y0.c, y0.h, y0.w);
  for (double& t : cot.v) t = nd(rng);

  ModelWeights grad = w.zeros_like();
  const Tensor4 dx = b(w, x, cot, grad);

  // Tensors whose gradients sit at roundoff level relative to the largest
  // one are compared against that floor instead of their own scale.
  double global = 0.0;
  for (const auto& [name, t] : grad.tensors)
    for (double v : t.v) global = std::max(global, std::abs(v));
  for (double v : dx.v) global = std::max(global, std::abs(v));
  const double floor = 1e-6 * global;

  GradCheckResult res;
  auto record = [&](const std::string& name, const std::vector<double>& ad, const std::vector<double>& fd) {
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      scale = std::max(scale, std::abs(fd[k]));
      err = std::max(err, std::abs(ad[k] - fd[k]));
    }
    scale = std::max(scale, floor);
    const double rel = scale > 0.0 ? err / scale : err;
    if (res.worst.empty() || rel > res.max_rel_error) {
      res.max_rel_error = rel;
      res.worst = name;
    }
  };

  ModelWeights wp = w;
  for (auto& [name, t] : wp.tensors) {
    std::vector<double> ad, fd;
    for (std::size_t k : pick(t.v.size(), samples, rng)) {
      const double orig = t.v[k];
      t.v[k] = orig + step;
      const double lp = probe(f(wp, x), cot);
      t.v[k] = orig - step;
      const double lm = probe(f(wp, x), cot);
      t.v[k] = orig;
      fd.push_back((lp - lm) / (2.0 * step));
      ad.push_back(grad.tensors.at(name).v[k]);
    }
    record(name, ad, fd);
  }

  Tensor4 xp = x;
  std::vector<double> ad, fd;
  for (std::size_t k : pick(x.v.size(), samples, rng)) {
    const double orig = xp.v[k];
    xp.v[k] = orig + step;
    const double lp = probe(f(w, xp), cot);
    xp.v[k] = orig - step;
    const double lm = probe(f(w, xp), cot);
    xp.v[k] = orig;
    fd.push_back((lp - lm) / (2.0 * step));
    ad.push_back(dx.v[k]);
  }
  record("input", ad, fd);
  return res;
}

GradCheckResult grad_check(const Network& net, const ModelWeights& w, const Tensor4& x, std::uint64_t seed,
                           int samples) {
  ForwardFn f = [&](const ModelWeights& ww, const Tensor4& xx) { return net.forward(ww, xx); };
  BackwardFn b = [&](const ModelWeights& ww, const Tensor4& xx, const Tensor4& dy, ModelWeights& g) {
    Cache c;
    net.forward(ww, xx, &c);
    return net.backward(ww, c, dy, g);
  };
  return grad_check(f, b, w, x, seed, samples);
}

}  // namespace pfno::nn
