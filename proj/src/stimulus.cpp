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

#include "gazeauth/stimulus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace gazeauth {

StimulusSchedule generate_schedule(std::uint64_t seed, const ScheduleParams& params) {
  if (!(params.grid_half_width_deg > 0.0) || !(params.grid_half_height_deg > 0.0))
    throw ConfigError("grid half-extents must be > 0");
  if (!(params.period_s > 0.0)) throw ConfigError("period_s must be > 0");

  std::array<int, 9> order{};
  for (int i = 0; i < 9; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  StimulusSchedule sched;
  sched.seed = seed;
  sched.period_s = params.period_s;
  sched.targets.reserve(9);
  double onset = 0.0;  // accumulated so that onsets chain exactly
  for (int slot = 0; slot < 9; ++slot) {
    const int cell = order[slot];
    StimulusTarget t;
    t.x_deg = (cell % 3 - 1) * params.grid_half_width_deg;
    t.y_deg = (cell / 3 - 1) * params.grid_half_height_deg;
    t.onset_s = onset;
    t.duration_s = params.period_s;
    onset += t.duration_s;
    sched.targets.push_back(t);
  }
  sched.total_s = onset;
  return sched;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (!structure_ok) os << "malformed (" << structure_error << "); ";
  os << "duration " << duration_s << " s vs " << expected_duration_s << " s " << (duration_ok ? "ok" : "FAIL")
     << "; valid fraction " << valid_fraction << ' ' << (validity_ok ? "ok" : "FAIL") << "; rate " << rate_hz
     << " Hz " << (rate_ok ? "ok" : "FAIL");
  return os.str();
}

ValidationReport validate_recording(const GazeRecording& rec, const StimulusSchedule& sched,
                                    const ValidationThresholds& thresholds) {
  ValidationReport r;
  r.rate_hz = rec.rate_hz;
  r.duration_s = rec.duration_s();
  r.expected_duration_s = sched.total_s;
  r.valid_fraction = rec.valid_fraction();
  try {
    rec.check();
    r.structure_ok = true;
  } catch (const Error& e) {
    r.structure_error = e.what();
  }
  r.duration_ok = std::abs(r.duration_s - sched.total_s) <= thresholds.tolerance_s;
  r.validity_ok = r.valid_fraction >= thresholds.min_valid_fraction;
  r.rate_ok = rec.rate_hz >= thresholds.min_rate_hz && rec.rate_hz <= thresholds.max_rate_hz;
  return r;
}

}  // namespace gazeauth
