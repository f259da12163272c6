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

#include <span>

#include "gazeauth/network.hpp"

namespace gazeauth {

struct MsLossParams {
  double alpha = 2.0;
  double beta = 50.0;
  double lambda = 0.5;
};

struct MsLossResult {
  double loss = 0.0;
  double positive_term = 0.0;  // batch mean of the positive-pair part
  double negative_term = 0.0;  // batch mean of the negative-pair part
  Matrix grad;                 // dL/dE, same shape as the embeddings
};

/// Multi-similarity loss over the columns of `embeddings` (D x m), with
/// S = E^T E:
///
///   L = 1/m sum_i [ 1/alpha log(1 + sum_{k in P_i} exp(-alpha (S_ik - lambda)))
///                 + 1/beta  log(1 + sum_{k in N_i} exp( beta (S_ik - lambda))) ]
///
/// Throws DegenerateBatchError if the batch has a single class or no
/// class with two members.
MsLossResult ms_loss(const Matrix& embeddings, std::span<const int> labels, const MsLossParams& params = {});

}  // namespace gazeauth
