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
#include <vector>

#include "gazeauth/error.hpp"
#include "gazeauth/ms_loss.hpp"
#include "test_support.hpp"

using namespace gazeauth;
using gazeauth::testing::Gen;

namespace {

// Loss written directly from its definition with explicit loops.
double reference_loss(const Matrix& e, const std::vector<int>& labels, const MsLossParams& p) {
  const Eigen::Index m = e.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double pos = 0.0, neg = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == i) continue;
      const double s = e.col(i).dot(e.col(k));
      if (labels[i] == labels[k])
        pos += std::exp(-p.alpha * (s - p.lambda));
      else
        neg += std::exp(p.beta * (s - p.lambda));
    }
    total += std::log1p(pos) / p.alpha + std::log1p(neg) / p.beta;
  }
  return total / m;
}

Matrix random_unit_columns(Gen& g, int dim, int m) {
  Matrix e(dim, m);
  for (int j = 0; j < m; ++j) {
    const auto v = g.unit_vector(dim);
    for (int i = 0; i < dim; ++i) e(i, j) = v[i];
  }
  return e;
}

}  // namespace

TEST_CASE("perfectly separated batch") {
  // Same-class pairs at S = 1, cross-class pairs at S = -1.
  Matrix e = Matrix::Zero(128, 4);
  e(0, 0) = e(0, 1) = 1.0;
  e(0, 2) = e(0, 3) = -1.0;
  const std::vector<int> labels{0, 0, 1, 1};
  const auto r = ms_loss(e, labels);
  // Each anchor has one positive: (1/2) log(1 + e^{-1}) = 0.15663084375911143.
  CHECK(r.positive_term == doctest::Approx(0.15663084375911143).epsilon(1e-12));
  // (1/50) log(1 + 2 e^{-75}) ~ 1.07e-34.
  CHECK(r.negative_term < 1e-8);
  CHECK(r.loss == doctest::Approx(r.positive_term + r.negative_term).epsilon(1e-15));
}

TEST_CASE("two classes of identical embeddings") {
  Matrix e = Matrix::Zero(128, 4);
  e.row(5).setOnes();
  const std::vector<int> labels{0, 0, 1, 1};
  const auto r = ms_loss(e, labels);
  // Per anchor: (1/2) log(1 + e^{-1}) + (1/50) log(1 + 2 e^{25}) = 0.6704937873704492.
  CHECK(r.loss == doctest::Approx(0.6704937873704492).epsilon(1e-12));
  CHECK(r.positive_term > 0.0);
  CHECK(r.negative_term == doctest::Approx(0.5138629436113378).epsilon(1e-12));
}

TEST_CASE("loss agrees with the definition on random batches") {
  Gen g(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int classes = g.integer(2, 5), per = g.integer(2, 4);
    std::vector<int> labels;
    for (int c = 0; c < classes; ++c)
      for (int k = 0; k < per; ++k) labels.push_back(c);
    const MsLossParams p{g.uniform(0.5, 10), g.uniform(1, 60), g.uniform(0.05, 0.9)};
    const Matrix e = random_unit_columns(g, 16, static_cast<int>(labels.size()));
    const auto r = ms_loss(e, labels, p);
    CHECK(r.loss >= 0.0);
    CHECK(std::isfinite(r.loss));
    CHECK(r.loss == doctest::Approx(reference_loss(e, labels, p)).epsilon(1e-11));
  }
}

TEST_CASE("gradient matches central finite differences") {
  Gen g(2);
  const std::vector<int> labels{0, 0, 1, 1, 2, 2};
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix e = random_unit_columns(g, 8, 6);
    const auto r = ms_loss(e, labels);
    const double h = 1e-6;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      Matrix plus = e, minus = e;
      plus.data()[i] += h;
      minus.data()[i] -= h;
      const double numeric = (ms_loss(plus, labels).loss - ms_loss(minus, labels).loss) / (2 * h);
      const double analytic = r.grad.data()[i];
      worst = std::max(worst, std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6}));
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("property: relabeling classes leaves the loss unchanged") {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) labels.push_back(i / 2);
    const Matrix e = random_unit_columns(g, 12, 8);
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), g.engine());
    std::vector<int> relabeled;
    for (int l : labels) relabeled.push_back(100 + 7 * perm[l]);
    const auto a = ms_loss(e, labels), b = ms_loss(e, relabeled);
    CHECK(a.loss == b.loss);
    CHECK((a.grad - b.grad).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("degenerate batches are rejected") {
  Gen g(4);
  const Matrix e = random_unit_columns(g, 8, 4);
  const std::vector<int> one_class{3, 3, 3, 3};
  const std::vector<int> no_pairs{0, 1, 2, 3};
  CHECK_THROWS_AS(ms_loss(e, one_class), DegenerateBatchError);
  CHECK_THROWS_AS(ms_loss(e, no_pairs), DegenerateBatchError);
  const std::vector<int> short_labels{0, 0, 1};
  CHECK_THROWS(ms_loss(e, short_labels));
}

TEST_CASE("large similarities do not overflow") {
  Matrix e = Matrix::Zero(4, 4);
  e.row(0).setOnes();
  const std::vector<int> labels{0, 0, 1, 1};
  const auto r = ms_loss(e, labels, {2.0, 2000.0, 0.5});
  CHECK(std::isfinite(r.loss));
  CHECK(r.grad.allFinite());
}
