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

#include <chrono>
#include <cmath>

#include "gazeauth/auth.hpp"
#include "gazeauth/error.hpp"
#include "gazeauth/experiment.hpp"
#include "test_support.hpp"

using namespace gazeauth;
using gazeauth::testing::data_path;
using gazeauth::testing::Gen;
using gazeauth::testing::reference_gram_fixture;

namespace {

const ModelParams& default_model() {
  static const ModelParams model = init_params(NetworkConfig{}, 77);
  return model;
}

GazeRecording one_recording(std::uint64_t seed, double rate) {
  return make_population(2, 2, seed, {}, rate).front().recording;
}

}  // namespace

TEST_CASE("cosine similarity of a vector with itself and its negation") {
  Gen g(1);
  for (int k = 0; k < 20; ++k) {
    auto v = g.unit_vector(kEmbeddingDim);
    const Embedding u(v, "m");
    for (auto& x : v) x = -x;
    const Embedding n(v, "m");
    CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(u, n) == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("cosine similarity is symmetric and bounded") {
  Gen g(2);
  for (int k = 0; k < 100; ++k) {
    const Embedding a(g.unit_vector(16), "m"), b(g.unit_vector(16), "m");
    const double s = cosine_similarity(a, b);
    CHECK(s == cosine_similarity(b, a));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
  CHECK_THROWS_AS(cosine_similarity(Embedding(g.unit_vector(16), "m1"), Embedding(g.unit_vector(16), "m2")),
                  ModelMismatchError);
  CHECK_THROWS_AS(cosine_similarity(Embedding(g.unit_vector(16), "m"), Embedding(g.unit_vector(8), "m")),
                  ModelMismatchError);
}

TEST_CASE("decision is monotone in the score") {
  Gen g(3);
  for (int k = 0; k < 200; ++k) {
    const DecisionPolicy p{g.uniform(-1, 1), Aggregation::kMax};
    const double s = g.uniform(-1, 1), bump = g.uniform(0, 0.5);
    if (decide(s, p) == Decision::kAccept) CHECK(decide(std::min(1.0, s + bump), p) == Decision::kAccept);
  }
  CHECK(decide(0.8, DecisionPolicy{}) == Decision::kAccept);
  CHECK(decide(std::nextafter(0.8, 0.0), DecisionPolicy{}) == Decision::kReject);
  CHECK_THROWS_AS(DecisionPolicy{1.5}.check(), ConfigError);
  CHECK(aggregation_from_string("mean") == Aggregation::kMean);
  CHECK_THROWS_AS(aggregation_from_string("median"), ConfigError);
}

TEST_CASE("verification against the reference templates") {
  const ScoreMatrix table = load_matrix_table(data_path("reference_similarity.tsv"));
  const auto fx = reference_gram_fixture(table, "reference");
  REQUIRE(fx.min_eigenvalue > 0.0);
  CHECK(cosine_similarity(fx.enroll[0].embedding, fx.verify[0].embedding) == doctest::Approx(0.8119).epsilon(1e-9));

  TemplateStore store;
  for (const auto& e : fx.enroll) store.enroll(e.subject, e.embedding);
  const DecisionPolicy policy;

  const auto a = verify_embedding("A", fx.verify[0].embedding, store, policy);  // A1 . A2
  CHECK(a.similarity == doctest::Approx(0.8119).epsilon(1e-9));
  CHECK(a.decision == Decision::kAccept);
  const auto c = verify_embedding("C", fx.verify[2].embedding, store, policy);  // C1 . C2
  CHECK(c.similarity == doctest::Approx(0.7987).epsilon(1e-9));
  CHECK(c.decision == Decision::kReject);
  const auto d = verify_embedding("D", fx.verify[0].embedding, store, policy);  // D1 . A2, impostor
  CHECK(d.similarity == doctest::Approx(0.8440).epsilon(1e-9));
  CHECK(d.decision == Decision::kAccept);

  // Scoring the fixture with compute_matrix reproduces the table.
  const ScoreMatrix back = compute_matrix(fx.enroll, fx.verify);
  CHECK((back.scores - table.scores).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(verify_embedding("Z", fx.verify[0].embedding, store, policy), NotFoundError);
}

TEST_CASE("max and mean aggregation over several templates") {
  Gen g(4);
  TemplateStore store;
  const Embedding e1(g.unit_vector(8), "m"), e2(g.unit_vector(8), "m"), probe(g.unit_vector(8), "m");
  store.enroll("u", e1);
  store.enroll("u", e2);
  const double s1 = cosine_similarity(e1, probe), s2 = cosine_similarity(e2, probe);
  CHECK(verify_embedding("u", probe, store, {0.0, Aggregation::kMax}).similarity == std::max(s1, s2));
  CHECK(verify_embedding("u", probe, store, {0.0, Aggregation::kMean}).similarity ==
        doctest::Approx((s1 + s2) / 2));
}

TEST_CASE("processing a 120 Hz recording") {
  const GazeRecording rec = one_recording(5, 120.0);
  const auto start = std::chrono::steady_clock::now();
  const Embedding e = process_recording(rec, default_model());
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  CHECK(e.dim() == 128);
  CHECK(e.model_id() == default_model().model_id);
  MESSAGE("embedding took " << ms << " ms");
  CHECK(ms < 1000.0);
}

TEST_CASE("recordings already at the model rate pass through unchanged") {
  const GazeRecording rec = one_recording(6, 125.0);
  const VelocitySequence v = prepare_velocity(rec, 125.0);
  const VelocitySequence direct = to_velocity(rec);
  CHECK(v == direct);
  // 1000 Hz is an integer multiple of 125 Hz and goes through decimation.
  const GazeRecording hi = one_recording(6, 1000.0);
  CHECK(prepare_velocity(hi, 125.0) == to_velocity(decimate(hi, 125.0)));
}

TEST_CASE("short recordings are rejected with a report") {
  GazeRecording rec = one_recording(7, 120.0);
  rec.samples.resize(360);  // 3 s
  try {
    process_recording(rec, default_model());
    FAIL("expected rejection");
  } catch (const RecordingRejectedError& e) {
    CHECK_FALSE(e.report().pass());
  }
}

TEST_CASE("verifying the enrolled recording itself scores one") {
  const GazeRecording rec = one_recording(8, 120.0);
  TemplateStore store;
  store.enroll("self", process_recording(rec, default_model()));
  const auto r = verify("self", rec, store, default_model(), DecisionPolicy{});
  CHECK(r.similarity == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.decision == Decision::kAccept);
  CHECK(r.embed_ms > 0.0);
  CHECK(r.total_ms >= r.embed_ms);
  CHECK_THROWS_AS(verify("nobody", rec, store, default_model(), DecisionPolicy{}), NotFoundError);
}

TEST_CASE("end-to-end evaluation over a small population") {
  const auto corpus = make_population(5, 2, 9, {}, 120.0);
  const auto r = end_to_end_eval(corpus, default_model(), 1, 2);
  CHECK(r.matrix.scores.rows() == 5);
  CHECK(r.matrix.scores.cols() == 5);
  CHECK(r.matrix.enroll_ids.front() == "U00-1");
  CHECK(r.matrix.verify_ids.back() == "U04-2");
  CHECK(r.matrix.genuine_count() == 5);
  CHECK(r.report.operating_threshold == kDefaultThreshold);

  // Probing with the enrollment recordings puts 1.0 on the diagonal.
  const auto same = end_to_end_eval(corpus, default_model(), 1, 1);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(same.matrix.scores(i, i) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(same.report.eer.num == 0);

  CHECK_THROWS_AS(end_to_end_eval(corpus, default_model(), 1, 3), ProtocolError);
  CHECK_THROWS_AS(end_to_end_eval(std::vector<LabeledRecording>{}, default_model(), 1, 2), ProtocolError);
}
