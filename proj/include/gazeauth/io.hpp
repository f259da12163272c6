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

// JSON encodings of the on-disk and on-wire formats.

#include <string>
#include <vector>

#include <json.hpp>

#include "gazeauth/eval.hpp"
#include "gazeauth/gaze_signal.hpp"
#include "gazeauth/stimulus.hpp"
#include "gazeauth/synth.hpp"
#include "gazeauth/trainer.hpp"

namespace gazeauth {

using Json = nlohmann::json;

// Recording: {rate_hz, samples: [{t, x_deg, y_deg, valid}], meta: {..}}.
// Parsing rejects unsorted or otherwise invalid recordings (ValidationError)
// and malformed documents (FormatError).
Json recording_to_json(const GazeRecording& rec);
GazeRecording recording_from_json(const Json& j);
GazeRecording load_recording(const std::string& path);
void save_recording(const GazeRecording& rec, const std::string& path);

Json velocity_to_json(const VelocitySequence& seq);

// Schedule: {seed, period_s, total_s, targets: [{x_deg, y_deg, onset_s, duration_s}]}.
Json schedule_to_json(const StimulusSchedule& sched);
StimulusSchedule schedule_from_json(const Json& j);

Json validation_report_to_json(const ValidationReport& report);

/// One row of a corpus manifest; `path` is relative to the manifest file.
struct ManifestEntry {
  std::string path;
  std::string user;
  int session = 0;
};

struct Manifest {
  std::string base_dir;
  std::vector<ManifestEntry> entries;

  std::string resolve(const ManifestEntry& e) const;
};

Manifest load_manifest(const std::string& path);
/// Writes one recording file per item plus manifest.json into `dir`.
Manifest write_corpus(const std::vector<LabeledRecording>& corpus, const std::string& dir);
std::vector<LabeledRecording> load_corpus(const Manifest& manifest);

Json rate_to_json(const Rate& r);
Json report_to_json(const EvalReport& report, const ScoreMatrix& matrix);
Json matrix_to_json(const ScoreMatrix& matrix);
Json train_log_to_json(const std::vector<EpochLog>& log);

Json network_config_to_json(const NetworkConfig& cfg);
NetworkConfig network_config_from_json(const Json& j);
Json norm_stats_to_json(const NormStats& stats);
NormStats norm_stats_from_json(const Json& j);

std::string read_text_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_text_file_atomic(const std::string& path, const std::string& text);

}  // namespace gazeauth
