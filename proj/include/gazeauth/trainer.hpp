// Copyright 2026 The gazeauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gazeauth/gaze_signal.hpp"
#include "gazeauth/ms_loss.hpp"
#include "gazeauth/network.hpp"

namespace gazeauth {

struct TrainConfig {
  MsLossParams loss;
  int classes_per_batch = 8;
  int samples_per_class = 4;
  double peak_lr = 1e-2;
  double warmup_frac = 0.3;  // linear warmup, then cosine decay to 0
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double bn_momentum = 0.1;
  int epochs = 100;
  DegradationConfig degradation;  // noise re-drawn every epoch after normalization
  bool augment = true;
  int n_folds = 4;
  int fold_index = 0;  // validation fold; -1 trains on every user

  void check() const;
};

/// Raw (deg/s) velocity sequence at the model rate with its subject label.
struct LabeledSequence {
  std::string label;
  VelocitySequence seq;
};

struct EpochLog {
  int epoch = 0;  // 0 = initial parameters, before any update
  double train_loss = 0.0;
  double val_loss = 0.0;  // NaN without a usable validation split
  double lr = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
  std::vector<std::string> train_users;
  std::vector<std::string> val_users;
};

/// Users sorted by name, user i goes to fold i % n_folds.
std::vector<int> assign_folds(std::span<const std::string> sorted_users, int n_folds);

double learning_rate(const TrainConfig& cfg, long step, long total_steps);

using EpochCallback = std::function<void(const EpochLog&)>;

/// Trains a single model. Normalization statistics are fitted on the
/// training users only and frozen into the result. Deterministic in `seed`.
/// Throws DataError for an empty corpus or fewer than two training users.
TrainResult train(std::span<const LabeledSequence> corpus, const NetworkConfig& net_cfg,
                  const TrainConfig& train_cfg, std::uint64_t seed, const EpochCallback& on_epoch = {});

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t parameters_checked = 0;
  std::string worst_tensor;  // "layer2.weight", "fc.bias", ...
};

/// Compares the analytic gradient of ms_loss(forward_batch(.)) against
/// central finite differences for every parameter, on a random 6-sample
/// batch (3 classes x 2) in training mode. Relative error is
/// |a - n| / max(|a|, |n|, 1e-6).
GradCheckResult grad_check(const NetworkConfig& net_cfg, std::uint64_t probe_seed, double step = 1e-5);

struct LossAndGradients {
  double loss = 0.0;
  std::vector<Matrix> grads;  // one per trainable tensor
  ForwardCache cache;
};

/// ms_loss over a training-mode forward pass, with gradients for every
/// trainable tensor.
LossAndGradients loss_and_gradients(const ModelParams& params, std::span<const Matrix> inputs,
                                    std::span<const int> labels, const MsLossParams& loss_params);

/// Flat name of trainable tensor `index`.
std::string tensor_name(const NetworkConfig& cfg, std::size_t index);

}  // namespace gazeauth
