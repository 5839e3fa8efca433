#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pfno/nn/models.hpp"
#include "pfno/train/dataset.hpp"

namespace pfno {

enum class LossKind { deepritz, data, residual };

LossKind parse_loss_kind(const std::string& s);
std::string to_string(LossKind k);

struct TrainConfig {
  LossKind loss = LossKind::deepritz;
  int batch_size = 32;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  int max_epochs = 1000;
  int window = 50;
  double threshold = 0.003;
  std::uint64_t seed = 0;
  int threads = 1;
  double time_budget_s = 0.0;  // 0: unlimited

  void validate() const;
};

struct LossHistoryRow {
  int epoch = 0;
  double wall_seconds = 0.0;
  double train_loss = 0.0;
  double moving_avg = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  nn::ModelWeights weights;
  std::vector<LossHistoryRow> history;
  std::string stop_reason;  // early_stop, max_epochs, time_budget, diverged
  bool diverged() const { return stop_reason == "diverged"; }
};

// Network input for sample k: (phi, U) channels when the model takes two.
nn::Tensor4 model_input(const nn::Network& net, const Dataset& data, std::size_t k);

// Loss of one sample; accumulates scale * dLoss/dweights into grad when given.
double sample_loss(const nn::Network& net, const nn::ModelWeights& w, const Dataset& data, std::size_t k,
                   LossKind loss, const Physics& phys, nn::ModelWeights* grad = nullptr, double scale = 1.0);

// Mean sample loss over the whole dataset.
double evaluate_loss(const nn::Network& net, const nn::ModelWeights& w, const Dataset& data, LossKind loss,
                     const Physics& phys, int threads = 1);

TrainResult train(const nn::Network& net, nn::ModelWeights init, const Dataset& data, const TrainConfig& cfg,
                  const Physics& phys);

void write_loss_history_csv(const std::filesystem::path& path, const std::vector<LossHistoryRow>& rows);

}  // namespace pfno
