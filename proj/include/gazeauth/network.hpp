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

// Dense 1-D convolutional embedding network.
//
// Every conv layer sees the channel concatenation of the network input and
// the outputs of all previous layers. A layer is
//
//     conv (dilated, zero "same" padding) -> ReLU -> batch norm
//
// and its output is appended to the feature stack. The full stack is
// averaged over time, projected to `embedding_dim`, and L2-normalized.
//
// Batch norm uses batch statistics in training mode and the running
// statistics stored in ModelParams otherwise.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gazeauth/gaze_signal.hpp"

namespace gazeauth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kEmbeddingDim = 128;
inline constexpr double kBatchNormEps = 1e-5;

struct NetworkConfig {
  int n_conv_layers = 8;
  int filters_per_layer = 32;
  int kernel_size = 3;
  std::vector<int> dilations{1, 2, 4, 8, 16, 32, 64, 128};
  int embedding_dim = kEmbeddingDim;
  int input_len = 1125;  // nominal; forward accepts any length >= receptive_field()
  int input_channels = 2;
  double rate_hz = 125.0;  // rate recordings are brought to before embedding

  void check() const;
  int receptive_field() const;
  int layer_input_channels(int layer) const { return input_channels + layer * filters_per_layer; }
  int feature_channels() const { return layer_input_channels(n_conv_layers); }

  bool operator==(const NetworkConfig&) const = default;
};

/// Smaller network for gradient checks and unit tests.
NetworkConfig downsized_config();

/// Network weights. Trainable tensors are stored in declaration order:
/// for each layer {conv weight (f x k*cin, tap-major), conv bias, bn gamma,
/// bn beta}, then {fc weight (D x C), fc bias}. Vectors are n x 1.
struct ModelParams {
  NetworkConfig config;
  std::vector<Matrix> tensors;
  std::vector<Vector> running_mean;
  std::vector<Vector> running_var;
  NormStats norm;
  std::string model_id;

  Matrix& conv_weight(int l) { return tensors[4 * l]; }
  const Matrix& conv_weight(int l) const { return tensors[4 * l]; }
  Matrix& conv_bias(int l) { return tensors[4 * l + 1]; }
  const Matrix& conv_bias(int l) const { return tensors[4 * l + 1]; }
  Matrix& bn_gamma(int l) { return tensors[4 * l + 2]; }
  const Matrix& bn_gamma(int l) const { return tensors[4 * l + 2]; }
  Matrix& bn_beta(int l) { return tensors[4 * l + 3]; }
  const Matrix& bn_beta(int l) const { return tensors[4 * l + 3]; }
  Matrix& fc_weight() { return tensors[4 * config.n_conv_layers]; }
  const Matrix& fc_weight() const { return tensors[4 * config.n_conv_layers]; }
  Matrix& fc_bias() { return tensors[4 * config.n_conv_layers + 1]; }
  const Matrix& fc_bias() const { return tensors[4 * config.n_conv_layers + 1]; }

  std::size_t parameter_count() const;
  /// Recomputes model_id from the current contents.
  void refresh_id();
};

/// Fan-in-scaled uniform initialization, deterministic in `seed`.
ModelParams init_params(const NetworkConfig& cfg, std::uint64_t seed);

/// 64-bit FNV-1a over config, normalization stats and every tensor, hex encoded.
std::string compute_model_id(const ModelParams& params);

/// Unit-norm template vector tagged with the model that produced it.
class Embedding {
 public:
  Embedding() = default;
  /// Throws InvalidInputError unless finite with unit norm (+-1e-6).
  Embedding(std::vector<double> values, std::string model_id);

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  const std::string& model_id() const { return model_id_; }

  bool operator==(const Embedding&) const = default;

 private:
  std::vector<double> values_;
  std::string model_id_;
};

/// 2 x length input matrix (rows vx, vy).
Matrix to_input(const VelocitySequence& seq);

/// Embeds a normalized sequence (eval-mode batch norm).
/// Throws InputTooShortError / InvalidInputError.
Embedding forward(const ModelParams& params, const VelocitySequence& normalized);
Vector forward_vector(const ModelParams& params, const Matrix& input);

/// Intermediate values kept for backpropagation.
struct ForwardCache {
  bool training = false;
  std::vector<Matrix> features;                  // per sample, C x L feature stack
  std::vector<std::vector<Matrix>> activations;  // [sample][layer] post-ReLU, f x L
  std::vector<Vector> bn_mean;                   // per layer, statistics actually used
  std::vector<Vector> bn_var;
  Matrix pooled;      // C x B
  Matrix projected;   // D x B, before L2 normalization
  Matrix embeddings;  // D x B
};

ForwardCache forward_batch(const ModelParams& params, std::span<const Matrix> inputs, bool training);

/// Gradients of a scalar loss w.r.t. every trainable tensor, given the
/// loss gradient w.r.t. the normalized embeddings (D x B).
std::vector<Matrix> backward_batch(const ModelParams& params, const ForwardCache& cache,
                                   const Matrix& d_embeddings);

}  // namespace gazeauth
