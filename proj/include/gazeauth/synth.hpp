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

#include "gazeauth/gaze_signal.hpp"
#include "gazeauth/stimulus.hpp"

namespace gazeauth {

/// Per-user oculomotor parameters driving the simulator.
struct SyntheticUserProfile {
  double eta = 550.0;            // main-sequence asymptotic peak velocity, deg/s
  double c = 7.0;                // main-sequence amplitude constant, deg
  double latency_mean_s = 0.2;
  double latency_std_s = 0.03;
  double fix_noise_deg = 0.05;   // jitter std, truncated at 3 sigma
  double drift_deg_s = 0.3;
  double undershoot_frac = 0.1;
  std::uint64_t seed = 0;

  void check() const;
};

/// V_p = eta * (1 - exp(-amplitude / c)).
double peak_velocity(const SyntheticUserProfile& profile, double amplitude_deg);

/// One planned ballistic movement with a raised-cosine velocity profile.
struct SaccadeEvent {
  double onset_s = 0.0;
  double duration_s = 0.0;
  double from_x = 0.0, from_y = 0.0;
  double to_x = 0.0, to_y = 0.0;
  double peak_velocity = 0.0;  // deg/s, equals 2 * amplitude / duration
  bool corrective = false;

  double amplitude() const;
};

struct SimulationTrace {
  GazeRecording recording;
  std::vector<SaccadeEvent> saccades;
};

/// Simulates the gaze response to `sched`. Deterministic in
/// (profile.seed, session_seed). rate_hz must lie in [60, 2000].
SimulationTrace simulate_trace(const SyntheticUserProfile& profile, const StimulusSchedule& sched, double rate_hz,
                               std::uint64_t session_seed);

GazeRecording simulate_recording(const SyntheticUserProfile& profile, const StimulusSchedule& sched, double rate_hz,
                                 std::uint64_t session_seed);

struct LabeledRecording {
  std::string user;
  int session = 0;  // 1-based
  GazeRecording recording;
};

/// Ranges users are drawn from; session-level perturbations are much narrower.
struct PopulationParams {
  double eta_min = 350.0, eta_max = 750.0;
  double c_min = 4.0, c_max = 11.0;
  double latency_mean_min = 0.14, latency_mean_max = 0.32;
  double latency_std_min = 0.01, latency_std_max = 0.05;
  double fix_noise_min = 0.02, fix_noise_max = 0.25;  // log-uniform
  double drift_min = 0.1, drift_max = 0.8;
  double undershoot_min = 0.0, undershoot_max = 0.15;
  double session_jitter = 0.03;  // relative std of per-session parameter wobble
};

SyntheticUserProfile draw_profile(std::uint64_t master_seed, int user_index, const PopulationParams& pop = {});

/// n_users x n_sessions recordings labeled (user, session), each session
/// with its own random grid order. Users are named "U00", "U01", ...
std::vector<LabeledRecording> make_population(int n_users, int n_sessions, std::uint64_t master_seed,
                                              const ScheduleParams& sched_params, double rate_hz,
                                              const PopulationParams& pop = {});

}  // namespace gazeauth
