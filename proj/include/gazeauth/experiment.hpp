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
#include <vector>

#include "gazeauth/auth.hpp"
#include "gazeauth/eval.hpp"
#include "gazeauth/io.hpp"
#include "gazeauth/synth.hpp"
#include "gazeauth/trainer.hpp"

namespace gazeauth {

/// Converts every recording to raw velocity at `model_rate_hz`, labeled by user.
std::vector<LabeledSequence> to_training_sequences(const std::vector<LabeledRecording>& corpus, double model_rate_hz);

struct EndToEndResult {
  ScoreMatrix matrix;
  EvalReport report;
};

/// Embeds session `enroll_session` of every user as the enrollment and
/// `verify_session` as the probe, then scores all pairs. Rows and columns
/// are sorted by label ("U03-1"). Throws ProtocolError if any user lacks
/// either session.
EndToEndResult end_to_end_eval(const std::vector<LabeledRecording>& corpus, const ModelParams& model,
                               int enroll_session, int verify_session, const PipelineConfig& pipeline = {},
                               std::optional<double> operating_threshold = kDefaultThreshold);

EndToEndResult end_to_end_eval(const Manifest& manifest, const ModelParams& model, int enroll_session,
                               int verify_session, const PipelineConfig& pipeline = {},
                               std::optional<double> operating_threshold = kDefaultThreshold);

}  // namespace gazeauth
