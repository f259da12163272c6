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

#include <string>

#include "gazeauth/gaze_signal.hpp"
#include "gazeauth/network.hpp"
#include "gazeauth/stimulus.hpp"
#include "gazeauth/template_store.hpp"

namespace gazeauth {

inline constexpr double kDefaultThreshold = 0.8;

enum class Aggregation { kMax, kMean };

struct DecisionPolicy {
  double threshold = kDefaultThreshold;
  Aggregation aggregation = Aggregation::kMax;

  void check() const;
};

enum class Decision { kAccept, kReject };

const char* to_string(Decision d);
const char* to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& s);

struct VerificationResult {
  std::string claimed_name;
  double similarity = 0.0;
  Decision decision = Decision::kReject;
  double threshold = kDefaultThreshold;
  double embed_ms = 0.0;
  double total_ms = 0.0;
};

/// Dot product of two unit-norm embeddings. Throws ModelMismatchError if
/// they come from different models or differ in dimension.
double cosine_similarity(const Embedding& a, const Embedding& b);

/// Accept iff similarity >= threshold.
Decision decide(double similarity, const DecisionPolicy& policy);

/// What a recording must look like to be embedded.
struct PipelineConfig {
  double expected_duration_s = 9.0;
  ValidationThresholds thresholds;
};

/// Brings `rec` to the model rate (decimation for integer ratios, linear
/// resampling otherwise), converts to velocity, applies the model's frozen
/// normalization and embeds it. Throws RecordingRejectedError when
/// validation fails.
Embedding process_recording(const GazeRecording& rec, const ModelParams& model, const PipelineConfig& cfg = {});

/// The preprocessing half of process_recording: raw (deg/s) velocity at `model_rate_hz`.
VelocitySequence prepare_velocity(const GazeRecording& rec, double model_rate_hz);

/// Scores `probe` against every template enrolled under `claimed_name`.
/// Throws NotFoundError.
VerificationResult verify_embedding(const std::string& claimed_name, const Embedding& probe,
                                    const TemplateStore& store, const DecisionPolicy& policy);

VerificationResult verify(const std::string& claimed_name, const GazeRecording& rec, const TemplateStore& store,
                          const ModelParams& model, const DecisionPolicy& policy, const PipelineConfig& cfg = {});

}  // namespace gazeauth
