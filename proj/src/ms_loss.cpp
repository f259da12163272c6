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

#include "gazeauth/ms_loss.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gazeauth/error.hpp"

namespace gazeauth {

namespace {

// log(1 + sum exp(a_k)) and the weights d/da_k = exp(a_k) / (1 + sum exp(a)),
// computed with a max shift so large exponents do not overflow.
double log1p_sum_exp(const std::vector<double>& a, std::vector<double>& weights) {
  weights.assign(a.size(), 0.0);
  if (a.empty()) return 0.0;
  const double shift = std::max(0.0, *std::max_element(a.begin(), a.end()));
  double denom = std::exp(-shift);
  for (std::size_t k = 0; k < a.size(); ++k) {
    weights[k] = std::exp(a[k] - shift);
    denom += weights[k];
  }
  for (auto& w : weights) w /= denom;
  return shift + std::log(denom);
}

}  // namespace

MsLossResult ms_loss(const Matrix& embeddings, std::span<const int> labels, const MsLossParams& params) {
  const auto m = embeddings.cols();
  if (static_cast<std::size_t>(m) != labels.size()) throw InvalidInputError("one label per embedding required");
  if (!(params.alpha > 0.0 && params.beta > 0.0 && params.lambda > 0.0))
    throw ConfigError("ms_loss alpha, beta, lambda must be positive");

  std::map<int, int> class_sizes;
  for (int c : labels) ++class_sizes[c];
  if (class_sizes.size() < 2) throw DegenerateBatchError("batch needs at least two classes (no negatives)");
  if (std::none_of(class_sizes.begin(), class_sizes.end(), [](const auto& kv) { return kv.second >= 2; }))
    throw DegenerateBatchError("batch needs a class with at least two samples (no positives)");

  const Matrix sim = embeddings.transpose() * embeddings;
  Matrix d_sim = Matrix::Zero(m, m);  // dL/dS_ik, treating S_ik and S_ki as independent

  MsLossResult out;
  std::vector<double> pos_a, neg_a, pos_w, neg_w;
  std::vector<Eigen::Index> pos_idx, neg_idx;
  for (Eigen::Index i = 0; i < m; ++i) {
    pos_a.clear();
    neg_a.clear();
    pos_idx.clear();
    neg_idx.clear();
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == i) continue;
      if (labels[k] == labels[i]) {
        pos_a.push_back(-params.alpha * (sim(i, k) - params.lambda));
        pos_idx.push_back(k);
      } else {
        neg_a.push_back(params.beta * (sim(i, k) - params.lambda));
        neg_idx.push_back(k);
      }
    }
    out.positive_term += log1p_sum_exp(pos_a, pos_w) / params.alpha;
    out.negative_term += log1p_sum_exp(neg_a, neg_w) / params.beta;
    for (std::size_t j = 0; j < pos_idx.size(); ++j) d_sim(i, pos_idx[j]) -= pos_w[j];
    for (std::size_t j = 0; j < neg_idx.size(); ++j) d_sim(i, neg_idx[j]) += neg_w[j];
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  out.positive_term *= inv_m;
  out.negative_term *= inv_m;
  out.loss = out.positive_term + out.negative_term;
  d_sim *= inv_m;
  // S = E^T E  =>  dE = E (G + G^T)
  out.grad = embeddings * (d_sim + d_sim.transpose());
  return out;
}

}  // namespace gazeauth
