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

#include "gazeauth/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include "gazeauth/error.hpp"

namespace gazeauth {

namespace {

constexpr double kNormFloor = 1e-12;

// Column offset of tap k for a kernel of size K at dilation d. Odd kernels
// are centred; even kernels lean forward in time.
int tap_offset(int k, int kernel_size, int dilation) { return (k - (kernel_size - 1) / 2) * dilation; }

// Fills y (f x L) with the dilated convolution of x (cin x L) plus bias.
template <typename XExpr>
void conv_forward(const Matrix& weight, const Matrix& bias, const XExpr& x, int kernel_size, int dilation,
                  Matrix& y) {
  const Eigen::Index len = x.cols();
  const Eigen::Index cin = x.rows();
  y.resize(weight.rows(), len);
  y.colwise() = bias.col(0);
  for (int k = 0; k < kernel_size; ++k) {
    const int o = tap_offset(k, kernel_size, dilation);
    const Eigen::Index n = len - std::abs(o);
    if (n <= 0) continue;
    const Eigen::Index t0 = std::max(0, -o);
    y.middleCols(t0, n).noalias() += weight.middleCols(k * cin, cin) * x.middleCols(t0 + o, n);
  }
}

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void matrix(const Matrix& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) f64(m.data()[i]);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

void NetworkConfig::check() const {
  if (n_conv_layers < 1 || filters_per_layer < 1 || kernel_size < 1 || embedding_dim < 1 || input_len < 1 ||
      input_channels < 1)
    throw ConfigError("network config counts must be >= 1");
  if (static_cast<int>(dilations.size()) != n_conv_layers)
    throw ConfigError("dilations must list one factor per conv layer");
  for (int d : dilations)
    if (d < 1) throw ConfigError("dilation factors must be >= 1");
  if (!(rate_hz > 0.0)) throw ConfigError("model rate_hz must be > 0");
}

int NetworkConfig::receptive_field() const {
  int rf = 1;
  for (int d : dilations) rf += (kernel_size - 1) * d;
  return rf;
}

NetworkConfig downsized_config() {
  NetworkConfig cfg;
  cfg.n_conv_layers = 3;
  cfg.filters_per_layer = 4;
  cfg.kernel_size = 3;
  cfg.dilations = {1, 2, 4};
  cfg.input_len = 32;
  return cfg;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += static_cast<std::size_t>(t.size());
  return n;
}

void ModelParams::refresh_id() { model_id = compute_model_id(*this); }

ModelParams init_params(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.check();
  std::mt19937_64 rng(seed);
  auto uniform_fill = [&](Matrix& m, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  };

  ModelParams p;
  p.config = cfg;
  const int f = cfg.filters_per_layer;
  for (int l = 0; l < cfg.n_conv_layers; ++l) {
    const int cin = cfg.layer_input_channels(l);
    Matrix w(f, static_cast<Eigen::Index>(cfg.kernel_size) * cin);
    uniform_fill(w, std::sqrt(6.0 / (cin * cfg.kernel_size)));  // He uniform for ReLU
    p.tensors.push_back(std::move(w));
    p.tensors.push_back(Matrix::Zero(f, 1));
    p.tensors.push_back(Matrix::Ones(f, 1));
    p.tensors.push_back(Matrix::Zero(f, 1));
    p.running_mean.push_back(Vector::Zero(f));
    p.running_var.push_back(Vector::Ones(f));
  }
  Matrix fc(cfg.embedding_dim, cfg.feature_channels());
  uniform_fill(fc, std::sqrt(3.0 / cfg.feature_channels()));
  p.tensors.push_back(std::move(fc));
  p.tensors.push_back(Matrix::Zero(cfg.embedding_dim, 1));
  p.refresh_id();
  return p;
}

std::string compute_model_id(const ModelParams& params) {
  Fnv1a h;
  const auto& c = params.config;
  for (int v : {c.n_conv_layers, c.filters_per_layer, c.kernel_size, c.embedding_dim, c.input_len, c.input_channels})
    h.u64(static_cast<std::uint64_t>(v));
  for (int d : c.dilations) h.u64(static_cast<std::uint64_t>(d));
  h.f64(c.rate_hz);
  for (double v : {params.norm.mean_x, params.norm.mean_y, params.norm.std_x, params.norm.std_y}) h.f64(v);
  for (const auto& t : params.tensors) h.matrix(t);
  for (const auto& v : params.running_mean) h.matrix(v);
  for (const auto& v : params.running_var) h.matrix(v);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

Embedding::Embedding(std::vector<double> values, std::string model_id)
    : values_(std::move(values)), model_id_(std::move(model_id)) {
  if (values_.empty()) throw InvalidInputError("embedding must not be empty");
  double sq = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInputError("embedding components must be finite");
    sq += v * v;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > 1e-6) throw InvalidInputError("embedding must have unit norm");
}

Matrix to_input(const VelocitySequence& seq) {
  const auto n = static_cast<Eigen::Index>(seq.length());
  Matrix x(2, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    x(0, t) = seq.vx[t];
    x(1, t) = seq.vy[t];
  }
  return x;
}

namespace {

void check_input(const NetworkConfig& cfg, const Matrix& input) {
  if (input.rows() != cfg.input_channels)
    throw InvalidInputError("input has " + std::to_string(input.rows()) + " channels, model expects " +
                            std::to_string(cfg.input_channels));
  if (input.cols() < cfg.receptive_field())
    throw InputTooShortError("input length " + std::to_string(input.cols()) + " is below the receptive field " +
                             std::to_string(cfg.receptive_field()));
  if (!input.allFinite()) throw InvalidInputError("input contains non-finite values");
}

}  // namespace

ForwardCache forward_batch(const ModelParams& params, std::span<const Matrix> inputs, bool training) {
  const auto& cfg = params.config;
  if (inputs.empty()) throw InvalidInputError("empty batch");
  for (const auto& x : inputs) check_input(cfg, x);

  const auto batch = inputs.size();
  const int n_layers = cfg.n_conv_layers;
  const int f = cfg.filters_per_layer;

  ForwardCache cache;
  cache.training = training;
  cache.features.resize(batch);
  cache.activations.assign(batch, std::vector<Matrix>(n_layers));
  for (std::size_t b = 0; b < batch; ++b) {
    cache.features[b].resize(cfg.feature_channels(), inputs[b].cols());
    cache.features[b].topRows(cfg.input_channels) = inputs[b];
  }

  for (int l = 0; l < n_layers; ++l) {
    const int cin = cfg.layer_input_channels(l);
    double count = 0.0;
    Vector sum = Vector::Zero(f);
    for (std::size_t b = 0; b < batch; ++b) {
      Matrix& a = cache.activations[b][l];
      conv_forward(params.conv_weight(l), params.conv_bias(l), cache.features[b].topRows(cin), cfg.kernel_size,
                   cfg.dilations[l], a);
      a = a.cwiseMax(0.0);
      sum += a.rowwise().sum();
      count += static_cast<double>(a.cols());
    }

    Vector mean, var;
    if (training) {
      mean = sum / count;
      var = Vector::Zero(f);
      for (std::size_t b = 0; b < batch; ++b)
        var += (cache.activations[b][l].colwise() - mean).array().square().matrix().rowwise().sum();
      var /= count;
    } else {
      mean = params.running_mean[l];
      var = params.running_var[l];
    }
    const Vector scale = params.bn_gamma(l).col(0).array() / (var.array() + kBatchNormEps).sqrt();
    const Vector shift = params.bn_beta(l).col(0) - scale.cwiseProduct(mean);
    for (std::size_t b = 0; b < batch; ++b) {
      cache.features[b].middleRows(cin, f) =
          (cache.activations[b][l].array().colwise() * scale.array()).colwise() + shift.array();
    }
    cache.bn_mean.push_back(std::move(mean));
    cache.bn_var.push_back(std::move(var));
  }

  cache.pooled.resize(cfg.feature_channels(), static_cast<Eigen::Index>(batch));
  for (std::size_t b = 0; b < batch; ++b)
    cache.pooled.col(static_cast<Eigen::Index>(b)) = cache.features[b].rowwise().mean();
  cache.projected = params.fc_weight() * cache.pooled;
  cache.projected.colwise() += params.fc_bias().col(0);
  cache.embeddings.resize(cache.projected.rows(), cache.projected.cols());
  for (Eigen::Index b = 0; b < cache.projected.cols(); ++b) {
    const double norm = std::max(cache.projected.col(b).norm(), kNormFloor);
    cache.embeddings.col(b) = cache.projected.col(b) / norm;
  }
  return cache;
}

std::vector<Matrix> backward_batch(const ModelParams& params, const ForwardCache& cache, const Matrix& d_embeddings) {
  const auto& cfg = params.config;
  const auto batch = cache.features.size();
  const int n_layers = cfg.n_conv_layers;
  const int f = cfg.filters_per_layer;
  if (d_embeddings.rows() != cache.embeddings.rows() || d_embeddings.cols() != cache.embeddings.cols())
    throw InvalidInputError("embedding gradient shape mismatch");

  std::vector<Matrix> grads;
  grads.reserve(params.tensors.size());
  for (const auto& t : params.tensors) grads.push_back(Matrix::Zero(t.rows(), t.cols()));

  // L2 normalization: d h = (g - e (e . g)) / |h|
  Matrix d_proj(d_embeddings.rows(), d_embeddings.cols());
  for (Eigen::Index b = 0; b < d_embeddings.cols(); ++b) {
    const double raw_norm = cache.projected.col(b).norm();
    if (raw_norm > kNormFloor) {
      const auto e = cache.embeddings.col(b);
      d_proj.col(b) = (d_embeddings.col(b) - e * e.dot(d_embeddings.col(b))) / raw_norm;
    } else {
      d_proj.col(b) = d_embeddings.col(b) / kNormFloor;
    }
  }

  const int fc = 4 * n_layers;
  grads[fc].noalias() = d_proj * cache.pooled.transpose();
  grads[fc + 1] = d_proj.rowwise().sum();
  const Matrix d_pooled = params.fc_weight().transpose() * d_proj;

  // Global average pooling spreads each channel's gradient evenly over time.
  std::vector<Matrix> d_features(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const auto len = cache.features[b].cols();
    d_features[b] = (d_pooled.col(static_cast<Eigen::Index>(b)) / static_cast<double>(len)).replicate(1, len);
  }

  for (int l = n_layers - 1; l >= 0; --l) {
    const int cin = cfg.layer_input_channels(l);
    const Matrix& weight = params.conv_weight(l);
    const Vector gamma = params.bn_gamma(l).col(0);
    const Vector inv_std = (cache.bn_var[l].array() + kBatchNormEps).rsqrt();
    const Vector& mean = cache.bn_mean[l];

    // Batch norm: accumulate the per-channel reductions over batch and time.
    Vector sum_dy = Vector::Zero(f);
    Vector sum_dy_xhat = Vector::Zero(f);
    double count = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const auto dy = d_features[b].middleRows(cin, f);
      const Matrix xhat = (cache.activations[b][l].colwise() - mean).array().colwise() * inv_std.array();
      sum_dy += dy.rowwise().sum();
      sum_dy_xhat += dy.cwiseProduct(xhat).rowwise().sum();
      count += static_cast<double>(dy.cols());
    }
    grads[4 * l + 2] = sum_dy_xhat;
    grads[4 * l + 3] = sum_dy;

    Matrix& d_weight = grads[4 * l];
    Matrix& d_bias = grads[4 * l + 1];
    for (std::size_t b = 0; b < batch; ++b) {
      const Matrix& act = cache.activations[b][l];
      const auto dy = d_features[b].middleRows(cin, f);
      Matrix d_act;
      if (cache.training) {
        const Matrix xhat = (act.colwise() - mean).array().colwise() * inv_std.array();
        // dA = gamma * inv_std / N * (N dy - sum(dy) - xhat * sum(dy * xhat))
        d_act = ((dy.array() * count).colwise() - sum_dy.array() -
                 xhat.array().colwise() * sum_dy_xhat.array())
                    .colwise() *
                (gamma.array() * inv_std.array() / count);
      } else {
        d_act = dy.array().colwise() * (gamma.array() * inv_std.array());
      }
      // ReLU
      const Matrix d_pre = (act.array() > 0.0).select(d_act, 0.0);

      d_bias += d_pre.rowwise().sum();
      const auto x = cache.features[b].topRows(cin);
      auto dx = d_features[b].topRows(cin);
      const auto len = x.cols();
      for (int k = 0; k < cfg.kernel_size; ++k) {
        const int o = tap_offset(k, cfg.kernel_size, cfg.dilations[l]);
        const Eigen::Index n = len - std::abs(o);
        if (n <= 0) continue;
        const Eigen::Index t0 = std::max(0, -o);
        d_weight.middleCols(k * cin, cin).noalias() += d_pre.middleCols(t0, n) * x.middleCols(t0 + o, n).transpose();
        dx.middleCols(t0 + o, n).noalias() += weight.middleCols(k * cin, cin).transpose() * d_pre.middleCols(t0, n);
      }
    }
  }
  return grads;
}

Vector forward_vector(const ModelParams& params, const Matrix& input) {
  const Matrix one[] = {input};
  const ForwardCache cache = forward_batch(params, one, false);
  return cache.embeddings.col(0);
}

Embedding forward(const ModelParams& params, const VelocitySequence& normalized) {
  const Vector v = forward_vector(params, to_input(normalized));
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-6) throw InvalidInputError("network produced a degenerate (zero) embedding");
  return Embedding(std::vector<double>(v.data(), v.data() + v.size()), params.model_id);
}

}  // namespace gazeauth
