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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazeauth/error.hpp"
#include "gazeauth/network.hpp"
#include "test_support.hpp"

using namespace gazeauth;
using gazeauth::testing::Gen;

namespace {

VelocitySequence random_sequence(Gen& g, std::size_t n) {
  VelocitySequence s;
  s.rate_hz = 125.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.vx.push_back(g.normal());
    s.vy.push_back(g.normal());
  }
  s.valid.assign(n, 1);
  return s;
}

// Randomizes the parameters that init_params leaves at constants so the
// reference comparison exercises every term.
void scramble(ModelParams& p, Gen& g) {
  for (int l = 0; l < p.config.n_conv_layers; ++l) {
    for (Eigen::Index i = 0; i < p.conv_bias(l).size(); ++i) p.conv_bias(l)(i) = g.normal(0, 0.1);
    for (Eigen::Index i = 0; i < p.bn_gamma(l).size(); ++i) p.bn_gamma(l)(i) = g.uniform(0.5, 1.5);
    for (Eigen::Index i = 0; i < p.bn_beta(l).size(); ++i) p.bn_beta(l)(i) = g.normal(0, 0.1);
    for (Eigen::Index i = 0; i < p.running_mean[l].size(); ++i) p.running_mean[l](i) = g.uniform(0, 0.5);
    for (Eigen::Index i = 0; i < p.running_var[l].size(); ++i) p.running_var[l](i) = g.uniform(0.2, 2.0);
  }
  for (Eigen::Index i = 0; i < p.fc_bias().size(); ++i) p.fc_bias()(i) = g.normal(0, 0.1);
  p.refresh_id();
}

// Straight-loop evaluation of the network in inference mode:
// conv (zero padding, centered taps) -> ReLU -> batch norm, dense concatenation,
// global average pooling, projection, L2 normalization.
std::vector<double> reference_forward(const ModelParams& p, const VelocitySequence& in) {
  const auto& cfg = p.config;
  const int len = static_cast<int>(in.length());
  std::vector<std::vector<double>> feats{in.vx, in.vy};
  for (int l = 0; l < cfg.n_conv_layers; ++l) {
    const int cin = static_cast<int>(feats.size());
    const int d = cfg.dilations[l];
    const Matrix& w = p.conv_weight(l);
    std::vector<std::vector<double>> out(cfg.filters_per_layer, std::vector<double>(len));
    for (int o = 0; o < cfg.filters_per_layer; ++o) {
      for (int t = 0; t < len; ++t) {
        double acc = p.conv_bias(l)(o);
        for (int k = 0; k < cfg.kernel_size; ++k) {
          const int src = t + (k - (cfg.kernel_size - 1) / 2) * d;
          if (src < 0 || src >= len) continue;
          for (int c = 0; c < cin; ++c) acc += w(o, k * cin + c) * feats[c][src];
        }
        const double relu = std::max(acc, 0.0);
        out[o][t] = (relu - p.running_mean[l](o)) / std::sqrt(p.running_var[l](o) + kBatchNormEps) * p.bn_gamma(l)(o) +
                    p.bn_beta(l)(o);
      }
    }
    for (auto& ch : out) feats.push_back(std::move(ch));
  }
  std::vector<double> pooled;
  for (const auto& ch : feats) {
    double s = 0.0;
    for (double v : ch) s += v;
    pooled.push_back(s / len);
  }
  std::vector<double> e(cfg.embedding_dim);
  double norm = 0.0;
  for (int j = 0; j < cfg.embedding_dim; ++j) {
    double acc = p.fc_bias()(j);
    for (std::size_t c = 0; c < pooled.size(); ++c) acc += p.fc_weight()(j, c) * pooled[c];
    e[j] = acc;
    norm += acc * acc;
  }
  norm = std::sqrt(norm);
  for (auto& v : e) v /= norm;
  return e;
}

double norm_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("default config shape") {
  const NetworkConfig cfg;
  CHECK_NOTHROW(cfg.check());
  CHECK(cfg.embedding_dim == 128);
  CHECK(cfg.dilations.size() == 8);
  CHECK(cfg.receptive_field() == 511);
  CHECK(cfg.layer_input_channels(0) == 2);
  CHECK(cfg.layer_input_channels(3) == 2 + 3 * 32);
  CHECK(cfg.feature_channels() == 2 + 8 * 32);

  const auto p = init_params(cfg, 1);
  REQUIRE(p.tensors.size() == 4 * 8 + 2);
  CHECK(p.conv_weight(2).rows() == 32);
  CHECK(p.conv_weight(2).cols() == 3 * (2 + 2 * 32));
  CHECK(p.fc_weight().rows() == 128);
  CHECK(p.fc_weight().cols() == cfg.feature_channels());
  CHECK(p.model_id.size() == 16);
}

TEST_CASE("config validation") {
  NetworkConfig cfg;
  cfg.dilations.pop_back();
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  cfg = NetworkConfig{};
  cfg.filters_per_layer = 0;
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  cfg = NetworkConfig{};
  cfg.dilations[3] = 0;
  CHECK_THROWS_AS(init_params(cfg, 1), ConfigError);
}

TEST_CASE("forward on a 9 s input gives a 128-d unit embedding") {
  Gen g(1);
  const auto p = init_params(NetworkConfig{}, 7);
  const auto e = forward(p, random_sequence(g, 1125));
  CHECK(e.dim() == 128);
  CHECK(norm_of(e.values()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.model_id() == p.model_id);
}

TEST_CASE("forward is bit-deterministic") {
  Gen g(2);
  const auto p = init_params(NetworkConfig{}, 7);
  const auto s = random_sequence(g, 1125);
  CHECK(forward(p, s) == forward(p, s));
}

TEST_CASE("forward accepts any length from the receptive field up") {
  Gen g(3);
  const auto p = init_params(NetworkConfig{}, 7);
  CHECK(forward(p, random_sequence(g, 1080)).dim() == 128);
  CHECK(forward(p, random_sequence(g, 1125)).dim() == 128);
  CHECK(forward(p, random_sequence(g, 511)).dim() == 128);
  CHECK_THROWS_AS(forward(p, random_sequence(g, 510)), InputTooShortError);
}

TEST_CASE("forward rejects non-finite input") {
  Gen g(4);
  const auto p = init_params(NetworkConfig{}, 7);
  auto s = random_sequence(g, 600);
  s.vy[17] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(forward(p, s), InvalidInputError);
  s.vy[17] = std::nan("");
  CHECK_THROWS_AS(forward(p, s), InvalidInputError);
}

TEST_CASE("forward matches a straight-loop reference") {
  Gen g(5);
  for (const NetworkConfig& cfg : {downsized_config(), NetworkConfig{}}) {
    auto p = init_params(cfg, 11);
    scramble(p, g);
    const auto s = random_sequence(g, std::max(cfg.receptive_field() + 7, 40));
    const auto got = forward(p, s).values();
    const auto want = reference_forward(p, s);
    REQUIRE(got.size() == want.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("forward_batch in eval mode agrees with forward") {
  Gen g(6);
  auto p = init_params(downsized_config(), 3);
  scramble(p, g);
  std::vector<VelocitySequence> seqs{random_sequence(g, 40), random_sequence(g, 55), random_sequence(g, 32)};
  std::vector<Matrix> inputs;
  for (const auto& s : seqs) inputs.push_back(to_input(s));
  const auto cache = forward_batch(p, inputs, false);
  for (std::size_t b = 0; b < seqs.size(); ++b) {
    const auto e = forward(p, seqs[b]).values();
    for (std::size_t j = 0; j < e.size(); ++j) CHECK(cache.embeddings(j, b) == doctest::Approx(e[j]).epsilon(1e-12));
  }
}

TEST_CASE("training mode uses batch statistics") {
  Gen g(7);
  auto p = init_params(downsized_config(), 3);
  scramble(p, g);
  std::vector<Matrix> inputs{to_input(random_sequence(g, 40)), to_input(random_sequence(g, 40))};
  const auto train = forward_batch(p, inputs, true);
  const auto eval = forward_batch(p, inputs, false);
  CHECK((train.embeddings - eval.embeddings).cwiseAbs().maxCoeff() > 1e-6);
  for (int l = 0; l < p.config.n_conv_layers; ++l)
    CHECK((train.bn_mean[l] - p.running_mean[l]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("permuting input frames changes the embedding") {
  Gen g(8);
  const auto p = init_params(downsized_config(), 3);
  auto s = random_sequence(g, 64);
  const auto before = forward(p, s).values();
  std::reverse(s.vx.begin(), s.vx.begin() + 32);
  std::reverse(s.vy.begin(), s.vy.begin() + 32);
  const auto after = forward(p, s).values();
  double diff = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) diff = std::max(diff, std::abs(before[i] - after[i]));
  CHECK(diff > 1e-9);
}

TEST_CASE("init_params is deterministic in its seed") {
  const auto a = init_params(NetworkConfig{}, 5), b = init_params(NetworkConfig{}, 5), c = init_params(NetworkConfig{}, 6);
  CHECK(a.model_id == b.model_id);
  CHECK(a.model_id != c.model_id);
  CHECK(a.tensors[0] == b.tensors[0]);
}

TEST_CASE("property: model_id changes iff a parameter changes") {
  Gen g(9);
  const auto base = init_params(downsized_config(), 1);
  CHECK(compute_model_id(base) == base.model_id);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = base;
    const auto t = static_cast<std::size_t>(g.integer(0, static_cast<int>(p.tensors.size()) - 1));
    const auto i = g.integer(0, static_cast<int>(p.tensors[t].size()) - 1);
    p.tensors[t].data()[i] = std::nextafter(p.tensors[t].data()[i], 1e9);
    p.refresh_id();
    CHECK(p.model_id != base.model_id);
  }
  auto p = base;
  p.running_var[1](0) += 1e-12;
  CHECK(compute_model_id(p) != base.model_id);
  p = base;
  p.norm.std_x *= 2.0;
  CHECK(compute_model_id(p) != base.model_id);
}

TEST_CASE("Embedding enforces unit norm") {
  CHECK_NOTHROW(Embedding({0.6, 0.8}, "m"));
  CHECK_NOTHROW(Embedding({0.6, 0.8 + 5e-7}, "m"));
  CHECK_THROWS_AS(Embedding({0.6, 0.9}, "m"), InvalidInputError);
  CHECK_THROWS_AS(Embedding({std::nan(""), 1.0}, "m"), InvalidInputError);
}

TEST_CASE("parameter count") {
  const auto cfg = downsized_config();
  const auto p = init_params(cfg, 1);
  std::size_t expected = 0;
  for (int l = 0; l < cfg.n_conv_layers; ++l)
    expected += cfg.filters_per_layer * (cfg.kernel_size * cfg.layer_input_channels(l) + 3);
  expected += cfg.embedding_dim * (cfg.feature_channels() + 1);
  CHECK(p.parameter_count() == expected);
}
