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

#include "gazeauth/auth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gazeauth/error.hpp"

namespace gazeauth {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void DecisionPolicy::check() const {
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in [-1, 1]");
}

const char* to_string(Decision d) { return d == Decision::kAccept ? "accept" : "reject"; }

const char* to_string(Aggregation a) { return a == Aggregation::kMax ? "max" : "mean"; }

Aggregation aggregation_from_string(const std::string& s) {
  if (s == "max") return Aggregation::kMax;
  if (s == "mean") return Aggregation::kMean;
  throw ConfigError("aggregation must be 'max' or 'mean', got '" + s + "'");
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.model_id() != b.model_id())
    throw ModelMismatchError("embeddings from models " + a.model_id() + " and " + b.model_id());
  if (a.dim() != b.dim()) throw ModelMismatchError("embedding dimensions differ");
  double dot = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) dot += a.values()[k] * b.values()[k];
  return std::clamp(dot, -1.0, 1.0);
}

Decision decide(double similarity, const DecisionPolicy& policy) {
  return similarity >= policy.threshold ? Decision::kAccept : Decision::kReject;
}

VelocitySequence prepare_velocity(const GazeRecording& rec, double model_rate_hz) {
  if (std::abs(rec.rate_hz - model_rate_hz) <= 1e-9 * model_rate_hz) return to_velocity(rec);
  const double ratio = rec.rate_hz / model_rate_hz;
  if (ratio > 1.0 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio)
    return to_velocity(decimate(rec, model_rate_hz));
  return to_velocity(resample_linear(rec, model_rate_hz));
}

Embedding process_recording(const GazeRecording& rec, const ModelParams& model, const PipelineConfig& cfg) {
  StimulusSchedule expected;
  expected.total_s = cfg.expected_duration_s;
  ValidationReport report = validate_recording(rec, expected, cfg.thresholds);
  if (!report.pass()) throw RecordingRejectedError(std::move(report));
  return forward(model, normalize(prepare_velocity(rec, model.config.rate_hz), model.norm));
}

VerificationResult verify_embedding(const std::string& claimed_name, const Embedding& probe,
                                    const TemplateStore& store, const DecisionPolicy& policy) {
  policy.check();
  const TemplateRecord& rec = store.lookup(claimed_name);
  VerificationResult result;
  result.claimed_name = claimed_name;
  result.threshold = policy.threshold;
  double best = -1.0, sum = 0.0;
  for (const auto& e : rec.embeddings) {
    const double s = cosine_similarity(e, probe);
    best = std::max(best, s);
    sum += s;
  }
  result.similarity = policy.aggregation == Aggregation::kMax ? best : sum / rec.embeddings.size();
  result.decision = decide(result.similarity, policy);
  return result;
}

VerificationResult verify(const std::string& claimed_name, const GazeRecording& rec, const TemplateStore& store,
                          const ModelParams& model, const DecisionPolicy& policy, const PipelineConfig& cfg) {
  const auto start = Clock::now();
  store.lookup(claimed_name);  // unknown names fail before the embedding work
  const Embedding probe = process_recording(rec, model, cfg);
  const double embed_ms = ms_since(start);
  VerificationResult result = verify_embedding(claimed_name, probe, store, policy);
  result.embed_ms = embed_ms;
  result.total_ms = ms_since(start);
  return result;
}

}  // namespace gazeauth
