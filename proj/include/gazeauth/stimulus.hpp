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

#include <cstdint>
#include <string>
#include <vector>

#include "gazeauth/error.hpp"
#include "gazeauth/gaze_signal.hpp"

namespace gazeauth {

struct StimulusTarget {
  double x_deg = 0.0;
  double y_deg = 0.0;
  double onset_s = 0.0;
  double duration_s = 0.0;

  bool operator==(const StimulusTarget&) const = default;
};

/// Random-order walk over the 3x3 grid; targets are gapless from t = 0.
struct StimulusSchedule {
  std::vector<StimulusTarget> targets;
  double total_s = 0.0;
  double period_s = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const StimulusSchedule&) const = default;
};

struct ScheduleParams {
  double grid_half_width_deg = 15.0;
  double grid_half_height_deg = 10.0;
  double period_s = 1.0;
};

/// Rendering hints shared with the browser demo.
inline constexpr double kTargetDiameterDeg = 0.5;

StimulusSchedule generate_schedule(std::uint64_t seed, const ScheduleParams& params = {});

struct ValidationThresholds {
  double tolerance_s = 0.5;
  double min_valid_fraction = 0.8;
  double min_rate_hz = 60.0;
  double max_rate_hz = 2000.0;
};

struct ValidationReport {
  double duration_s = 0.0;
  double expected_duration_s = 0.0;
  double valid_fraction = 0.0;
  double rate_hz = 0.0;
  bool duration_ok = false;
  bool validity_ok = false;
  bool rate_ok = false;
  bool structure_ok = false;  // recording invariants (sorted, >= 2 samples)
  std::string structure_error;

  bool pass() const { return duration_ok && validity_ok && rate_ok && structure_ok; }
  std::string summary() const;
};

ValidationReport validate_recording(const GazeRecording& rec, const StimulusSchedule& sched,
                                    const ValidationThresholds& thresholds = {});

class RecordingRejectedError : public Error {
 public:
  explicit RecordingRejectedError(ValidationReport report)
      : Error(ErrorCode::kRecordingRejected, "recording rejected: " + report.summary()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace gazeauth
