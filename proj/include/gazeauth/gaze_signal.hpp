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
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gazeauth {

/// Physiological ceiling applied to every velocity estimate, deg/s.
inline constexpr double kMaxVelocityDegS = 1000.0;

struct GazeSample {
  double t = 0.0;      // seconds since recording start
  double x = 0.0;      // horizontal gaze angle, degrees
  double y = 0.0;      // vertical gaze angle, degrees
  bool valid = true;   // tracker confidence

  bool operator==(const GazeSample&) const = default;
};

/// A timestamped two-channel gaze signal at a nominal sampling rate.
struct GazeRecording {
  double rate_hz = 0.0;
  std::vector<GazeSample> samples;
  std::map<std::string, std::string> meta;

  /// Nominal duration: sample count times the sampling period.
  double duration_s() const { return rate_hz > 0.0 ? samples.size() / rate_hz : 0.0; }
  double valid_fraction() const;

  /// Throws ValidationError if the invariants (rate > 0, >= 2 samples,
  /// strictly increasing t >= 0, finite valid coordinates) do not hold.
  void check() const;

  bool operator==(const GazeRecording&) const = default;
};

struct DegradationConfig {
  double target_rate_hz = 125.0;
  double noise_mean = 0.0;  // z-score units
  double noise_std = 0.1;   // z-score units
  std::uint64_t seed = 0;
};

/// Corpus-level per-channel z-score statistics (population convention).
struct NormStats {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double std_x = 1.0;
  double std_y = 1.0;

  bool operator==(const NormStats&) const = default;
};

/// Two-channel angular velocity, deg/s before normalization and z-score
/// units after. `valid[i] == 0` marks an imputed sample.
struct VelocitySequence {
  double rate_hz = 0.0;
  std::vector<double> vx;
  std::vector<double> vy;
  std::vector<std::uint8_t> valid;

  std::size_t length() const { return vx.size(); }

  bool operator==(const VelocitySequence&) const = default;
};

/// Keeps samples 0, k, 2k, ... where k = rate_hz / target_rate_hz.
/// Throws DecimationRatioError unless k is a positive integer.
GazeRecording decimate(const GazeRecording& rec, double target_rate_hz);

/// Linear interpolation onto a uniform grid t0 + i / target_rate_hz,
/// i < round(span * target_rate_hz) + 1. Grid points past the last source
/// sample extend the final segment linearly. A point is valid iff both
/// bracketing samples are.
GazeRecording resample_linear(const GazeRecording& rec, double target_rate_hz);

/// Central-difference velocity with endpoint replication, clamped to
/// +-kMaxVelocityDegS. Samples that are invalid or touch an invalid
/// neighbour are imputed as 0 and flagged in `valid`.
VelocitySequence to_velocity(const GazeRecording& rec);

/// Pooled per-channel mean/std over the valid samples of every sequence.
NormStats fit_norm_stats(std::span<const VelocitySequence> corpus);

VelocitySequence normalize(const VelocitySequence& seq, const NormStats& stats);
VelocitySequence denormalize(const VelocitySequence& seq, const NormStats& stats);

/// Adds iid Gaussian noise N(noise_mean, noise_std^2) independently per
/// channel, deterministic in cfg.seed. Throws ConfigError if noise_std < 0.
VelocitySequence add_noise(const VelocitySequence& seq, const DegradationConfig& cfg);

}  // namespace gazeauth
