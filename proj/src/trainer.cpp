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

#include "gazeauth/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "gazeauth/error.hpp"
#include "gazeauth/seed.hpp"

namespace gazeauth {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kPlanStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

struct Batch {
  std::vector<std::size_t> items;  // indices into the corpus
  std::vector<int> labels;
};

struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  long step = 0;
};

}  // namespace

void TrainConfig::check() const {
  if (classes_per_batch < 2) throw ConfigError("classes_per_batch must be >= 2");
  if (samples_per_class < 2) throw ConfigError("samples_per_class must be >= 2");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(peak_lr > 0.0)) throw ConfigError("peak_lr must be > 0");
  if (!(warmup_frac >= 0.0 && warmup_frac < 1.0)) throw ConfigError("warmup_frac must lie in [0, 1)");
  if (!(bn_momentum > 0.0 && bn_momentum <= 1.0)) throw ConfigError("bn_momentum must lie in (0, 1]");
  if (n_folds < 2) throw ConfigError("n_folds must be >= 2");
  if (fold_index >= n_folds || fold_index < -1) throw ConfigError("fold_index out of range");
  if (!(degradation.noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
}

std::vector<int> assign_folds(std::span<const std::string> sorted_users, int n_folds) {
  std::vector<int> folds(sorted_users.size());
  for (std::size_t i = 0; i < folds.size(); ++i) folds[i] = static_cast<int>(i % n_folds);
  return folds;
}

double learning_rate(const TrainConfig& cfg, long step, long total_steps) {
  const long warm = std::max(1L, std::lround(cfg.warmup_frac * total_steps));
  if (step < warm) return cfg.peak_lr * static_cast<double>(step + 1) / warm;
  const double progress = static_cast<double>(step - warm) / std::max(1L, total_steps - warm);
  return cfg.peak_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * std::min(1.0, progress)));
}

std::string tensor_name(const NetworkConfig& cfg, std::size_t index) {
  static const char* kLayerParts[] = {"weight", "bias", "bn_gamma", "bn_beta"};
  const auto conv_tensors = static_cast<std::size_t>(4 * cfg.n_conv_layers);
  if (index < conv_tensors) return "layer" + std::to_string(index / 4) + "." + kLayerParts[index % 4];
  return index == conv_tensors ? "fc.weight" : "fc.bias";
}

LossAndGradients loss_and_gradients(const ModelParams& params, std::span<const Matrix> inputs,
                                    std::span<const int> labels, const MsLossParams& loss_params) {
  LossAndGradients out;
  out.cache = forward_batch(params, inputs, true);
  const MsLossResult loss = ms_loss(out.cache.embeddings, labels, loss_params);
  out.loss = loss.loss;
  out.grads = backward_batch(params, out.cache, loss.grad);
  return out;
}

TrainResult train(std::span<const LabeledSequence> corpus, const NetworkConfig& net_cfg,
                  const TrainConfig& train_cfg, std::uint64_t seed, const EpochCallback& on_epoch) {
  net_cfg.check();
  train_cfg.check();
  if (corpus.empty()) throw DataError("training corpus is empty");

  std::map<std::string, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_user[corpus[i].label].push_back(i);
  std::vector<std::string> users;
  for (const auto& kv : by_user) users.push_back(kv.first);
  const std::vector<int> folds = assign_folds(users, train_cfg.n_folds);

  TrainResult result;
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (train_cfg.fold_index >= 0 && folds[u] == train_cfg.fold_index)
      result.val_users.push_back(users[u]);
    else
      result.train_users.push_back(users[u]);
  }
  if (result.train_users.size() < 2)
    throw DataError("training split needs at least 2 users, got " + std::to_string(result.train_users.size()));
  if (std::none_of(result.train_users.begin(), result.train_users.end(),
                   [&](const std::string& u) { return by_user[u].size() >= 2; }))
    throw DataError("no training user has two or more recordings");

  std::map<std::string, int> label_ids;
  for (std::size_t u = 0; u < users.size(); ++u) label_ids[users[u]] = static_cast<int>(u);

  std::vector<VelocitySequence> train_raw;
  for (const auto& u : result.train_users)
    for (std::size_t i : by_user[u]) train_raw.push_back(corpus[i].seq);
  const NormStats stats = fit_norm_stats(train_raw);

  std::vector<VelocitySequence> normalized;
  normalized.reserve(corpus.size());
  for (const auto& item : corpus) normalized.push_back(normalize(item.seq, stats));

  ModelParams params = init_params(net_cfg, derive_seed({seed, kInitStream}));
  params.norm = stats;

  // Batches group classes_per_batch users; a trailing single user is merged
  // into the previous batch so every batch has negatives.
  auto make_plan = [&](int epoch) {
    std::mt19937_64 rng(derive_seed({seed, kPlanStream, static_cast<std::uint64_t>(epoch)}));
    std::vector<std::string> order = result.train_users;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::string>> groups;
    for (std::size_t i = 0; i < order.size(); i += train_cfg.classes_per_batch) {
      const auto end = std::min(order.size(), i + train_cfg.classes_per_batch);
      groups.emplace_back(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(end));
    }
    if (groups.size() > 1 && groups.back().size() < 2) {
      groups[groups.size() - 2].push_back(groups.back().front());
      groups.pop_back();
    }
    std::vector<Batch> batches;
    for (const auto& group : groups) {
      Batch batch;
      for (const auto& u : group) {
        std::vector<std::size_t> items = by_user[u];
        std::shuffle(items.begin(), items.end(), rng);
        items.resize(std::min<std::size_t>(items.size(), train_cfg.samples_per_class));
        for (std::size_t i : items) {
          batch.items.push_back(i);
          batch.labels.push_back(label_ids[u]);
        }
      }
      batches.push_back(std::move(batch));
    }
    return batches;
  };

  auto batch_inputs = [&](const Batch& batch, int epoch) {
    std::vector<Matrix> inputs;
    inputs.reserve(batch.items.size());
    for (std::size_t i : batch.items) {
      if (train_cfg.augment) {
        DegradationConfig noise = train_cfg.degradation;
        noise.seed = derive_seed({seed, kNoiseStream, static_cast<std::uint64_t>(epoch), i});
        inputs.push_back(to_input(add_noise(normalized[i], noise)));
      } else {
        inputs.push_back(to_input(normalized[i]));
      }
    }
    return inputs;
  };

  std::vector<Matrix> val_inputs;
  std::vector<int> val_labels;
  for (const auto& u : result.val_users) {
    for (std::size_t i : by_user[u]) {
      val_inputs.push_back(to_input(normalized[i]));
      val_labels.push_back(label_ids[u]);
    }
  }
  auto validation_loss = [&]() {
    if (val_inputs.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
      const ForwardCache cache = forward_batch(params, val_inputs, false);
      return ms_loss(cache.embeddings, val_labels, train_cfg.loss).loss;
    } catch (const DegenerateBatchError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  auto report = [&](const EpochLog& entry) {
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  };

  const long batches_per_epoch = static_cast<long>(make_plan(0).size());
  const long total_steps = batches_per_epoch * train_cfg.epochs;

  {
    EpochLog entry;
    double sum = 0.0;
    const auto plan = make_plan(0);
    for (const auto& batch : plan) {
      const auto inputs = batch_inputs(batch, 0);
      sum += ms_loss(forward_batch(params, inputs, true).embeddings, batch.labels, train_cfg.loss).loss;
    }
    entry.train_loss = sum / static_cast<double>(plan.size());
    entry.val_loss = validation_loss();
    report(entry);
  }

  AdamState adam;
  for (const auto& t : params.tensors) {
    adam.m.push_back(Matrix::Zero(t.rows(), t.cols()));
    adam.v.push_back(Matrix::Zero(t.rows(), t.cols()));
  }

  for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    EpochLog entry;
    entry.epoch = epoch;
    double sum = 0.0;
    const auto plan = make_plan(epoch);
    for (const auto& batch : plan) {
      const auto inputs = batch_inputs(batch, epoch);
      LossAndGradients lg = loss_and_gradients(params, inputs, batch.labels, train_cfg.loss);
      sum += lg.loss;

      const double lr = learning_rate(train_cfg, adam.step, total_steps);
      entry.lr = lr;
      ++adam.step;
      const double bias1 = 1.0 - std::pow(train_cfg.adam_beta1, static_cast<double>(adam.step));
      const double bias2 = 1.0 - std::pow(train_cfg.adam_beta2, static_cast<double>(adam.step));
      for (std::size_t t = 0; t < params.tensors.size(); ++t) {
        const Matrix& g = lg.grads[t];
        adam.m[t] = train_cfg.adam_beta1 * adam.m[t] + (1.0 - train_cfg.adam_beta1) * g;
        adam.v[t] = train_cfg.adam_beta2 * adam.v[t] + (1.0 - train_cfg.adam_beta2) * g.cwiseProduct(g);
        params.tensors[t].array() -=
            lr * (adam.m[t].array() / bias1) / ((adam.v[t].array() / bias2).sqrt() + train_cfg.adam_eps);
      }
      const double mom = train_cfg.bn_momentum;
      for (int l = 0; l < net_cfg.n_conv_layers; ++l) {
        params.running_mean[l] = (1.0 - mom) * params.running_mean[l] + mom * lg.cache.bn_mean[l];
        params.running_var[l] = (1.0 - mom) * params.running_var[l] + mom * lg.cache.bn_var[l];
      }
    }
    entry.train_loss = sum / static_cast<double>(plan.size());
    entry.val_loss = validation_loss();
    report(entry);
  }

  params.refresh_id();
  result.params = std::move(params);
  return result;
}

GradCheckResult grad_check(const NetworkConfig& net_cfg, std::uint64_t probe_seed, double step) {
  ModelParams params = init_params(net_cfg, derive_seed({probe_seed, kInitStream}));
  std::mt19937_64 rng(derive_seed({probe_seed, 0x6772ULL}));
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Move biases and batch-norm affine terms off their symmetric init so
  // every gradient path is exercised.
  for (int l = 0; l < net_cfg.n_conv_layers; ++l) {
    for (Matrix* t : {&params.conv_bias(l), &params.bn_beta(l)})
      for (Eigen::Index i = 0; i < t->size(); ++i) t->data()[i] = 0.1 * gauss(rng);
    for (Eigen::Index i = 0; i < params.bn_gamma(l).size(); ++i) params.bn_gamma(l).data()[i] = 1.0 + 0.1 * gauss(rng);
  }
  for (Eigen::Index i = 0; i < params.fc_bias().size(); ++i) params.fc_bias().data()[i] = 0.1 * gauss(rng);

  const std::vector<int> labels{0, 0, 1, 1, 2, 2};
  std::vector<Matrix> inputs;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    Matrix x(net_cfg.input_channels, net_cfg.input_len);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
    inputs.push_back(std::move(x));
  }

  const MsLossParams loss_params;
  const LossAndGradients analytic = loss_and_gradients(params, inputs, labels, loss_params);
  auto loss_at = [&](const ModelParams& p) {
    return ms_loss(forward_batch(p, inputs, true).embeddings, labels, loss_params).loss;
  };

  GradCheckResult result;
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    for (Eigen::Index i = 0; i < params.tensors[t].size(); ++i) {
      double& w = params.tensors[t].data()[i];
      const double saved = w;
      w = saved + step;
      const double up = loss_at(params);
      w = saved - step;
      const double down = loss_at(params);
      w = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic.grads[t].data()[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_tensor = tensor_name(net_cfg, t);
      }
      ++result.parameters_checked;
    }
  }
  return result;
}

}  // namespace gazeauth
