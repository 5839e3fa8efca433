#include "pfno/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <fmt/os.h>
#include <spdlog/spdlog.h>

#include "pfno/error.hpp"
#include "pfno/train/adam.hpp"
#include "pfno/train/losses.hpp"

namespace pfno {

LossKind parse_loss_kind(const std::string& s) {
  if (s == "deepritz") return LossKind::deepritz;
  if (s == "data") return LossKind::data;
  if (s == "residual") return LossKind::residual;
  throw InvalidArgument("unknown loss kind: " + s);
}

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::deepritz: return "deepritz";
    case LossKind::data: return "data";
    case LossKind::residual: return "residual";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidArgument("train: batch size must be >= 1");
  if (!(threshold > 0.0)) throw InvalidArgument("train: early-stop threshold must be > 0");
  if (window < 1) throw InvalidArgument("train: early-stop window must be >= 1");
  if (!(lr > 0.0)) throw InvalidArgument("train: learning rate must be > 0");
  if (max_epochs < 1) throw InvalidArgument("train: max epochs must be >= 1");
  if (threads < 1) throw InvalidArgument("train: threads must be >= 1");
}

nn::Tensor4 model_input(const nn::Network& net, const Dataset& data, std::size_t k) {
  if (net.spec().input_channels() == 2) {
    if (data.temps.empty()) throw InvalidArgument("model takes (phi, U) but the dataset has no U");
    return nn::from_fields({data.inputs[k], data.temps[k]});
  }
  return nn::from_fields({data.inputs[k]});
}

double sample_loss(const nn::Network& net, const nn::ModelWeights& w, const Dataset& data, std::size_t k,
                   LossKind loss, const Physics& phys, nn::ModelWeights* grad, double scale) {
  const nn::Tensor4 x = model_input(net, data, k);
  nn::Cache cache;
  const nn::Tensor4 y = net.forward(w, x, grad ? &cache : nullptr);
  const Grid2D& g = data.inputs[k].grid;
  const Field2D pred = nn::to_field(y, 0, 0, g);
  LossGrad lg;
  switch (loss) {
    case LossKind::data:
      if (!data.has_targets()) throw InvalidArgument("data loss needs dataset targets");
      lg = loss_data_grad(pred, data.targets[k]);
      break;
    case LossKind::deepritz:
      if (data.model == PhysModel::ac) lg = loss_deepritz_ac_grad(pred, data.inputs[k], phys.ac);
      else lg = loss_deepritz_dendrite_grad(pred, data.inputs[k], data.temps.at(k), phys.dendrite);
      break;
    case LossKind::residual:
      if (data.model != PhysModel::dendrite) throw InvalidArgument("residual loss applies to the dendrite model");
      lg = loss_scheme_residual_grad(pred, data.inputs[k], data.temps.at(k), phys.dendrite);
      break;
  }
  if (grad) {
    nn::Tensor4 dy(1, 1, g.n, g.n);
    for (std::size_t i = 0; i < dy.v.size(); ++i) dy.v[i] = scale * lg.grad.v[i];
    net.backward(w, cache, dy, *grad);
  }
  return lg.value;
}

namespace {

// Runs f(i) for i in [0, count) on `threads` workers with a static stride partition.
template <class F>
void parallel_for(std::size_t count, int threads, F f) {
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (t == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errs(t);
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += t) f(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace

double evaluate_loss(const nn::Network& net, const nn::ModelWeights& w, const Dataset& data, LossKind loss,
                     const Physics& phys, int threads) {
  std::vector<double> v(data.size());
  parallel_for(data.size(), threads, [&](std::size_t k) { v[k] = sample_loss(net, w, data, k, loss, phys); });
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

TrainResult train(const nn::Network& net, nn::ModelWeights init, const Dataset& data, const TrainConfig& cfg,
                  const Physics& phys) {
  cfg.validate();
  if (data.size() == 0) throw InvalidArgument("train: empty dataset");
  if (cfg.loss == LossKind::data && !data.has_targets()) throw InvalidArgument("train: data loss needs targets");

  TrainResult res;
  res.weights = std::move(init);
  std::vector<double> theta = res.weights.flatten();
  Adam adam(theta.size(), cfg.lr, cfg.beta1, cfg.beta2);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> epoch_losses;
  double prev_avg = std::numeric_limits<double>::quiet_NaN();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t bs = std::min<std::size_t>(cfg.batch_size, order.size() - start);
      std::vector<nn::ModelWeights> grads(bs);
      std::vector<double> losses(bs);
      parallel_for(bs, cfg.threads, [&](std::size_t i) {
        grads[i] = res.weights.zeros_like();
        losses[i] = sample_loss(net, res.weights, data, order[start + i], cfg.loss, phys, &grads[i],
                                1.0 / static_cast<double>(bs));
      });
      double batch_loss = 0.0;
      for (double l : losses) batch_loss += l;
      if (!std::isfinite(batch_loss)) {
        res.stop_reason = "diverged";
        spdlog::error("non-finite loss at epoch {}", epoch);
        return res;
      }
      epoch_sum += batch_loss;
      std::vector<double> g = grads[0].flatten();
      for (std::size_t i = 1; i < bs; ++i) {
        const auto gi = grads[i].flatten();
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += gi[j];
      }
      adam.step(theta, g);
      res.weights.unflatten(theta);
    }
    const double epoch_loss = epoch_sum / static_cast<double>(data.size());
    epoch_losses.push_back(epoch_loss);
    const std::size_t win = std::min<std::size_t>(cfg.window, epoch_losses.size());
    double avg = 0.0;
    for (std::size_t k = epoch_losses.size() - win; k < epoch_losses.size(); ++k) avg += epoch_losses[k];
    avg /= static_cast<double>(win);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.history.push_back({epoch, wall, epoch_loss, avg, cfg.lr});
    spdlog::debug("epoch {} loss {:.10g} avg {:.10g}", epoch, epoch_loss, avg);

    const bool full = epoch_losses.size() > static_cast<std::size_t>(cfg.window);
    if (full && std::abs(avg - prev_avg) < cfg.threshold * std::abs(avg)) {
      res.stop_reason = "early_stop";
      return res;
    }
    prev_avg = avg;
    if (cfg.time_budget_s > 0.0 && wall > cfg.time_budget_s) {
      res.stop_reason = "time_budget";
      return res;
    }
  }
  res.stop_reason = "max_epochs";
  return res;
}

void write_loss_history_csv(const std::filesystem::path& path, const std::vector<LossHistoryRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto f = fmt::output_file(path.string());
  f.print("epoch,wall_seconds,train_loss,moving_avg,lr\n");
  for (const auto& r : rows)
    f.print("{},{:.6f},{:.17g},{:.17g},{:.17g}\n", r.epoch, r.wall_seconds, r.train_loss, r.moving_avg, r.lr);
}

}  // namespace pfno
