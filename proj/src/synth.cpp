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

#include "gazeauth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "gazeauth/error.hpp"
#include "gazeauth/seed.hpp"

namespace gazeauth {

namespace {

constexpr double kCorrectionDelayS = 0.100;
constexpr double kMinLatencyS = 0.08;
constexpr double kMaxLatencyS = 0.60;

struct Fixation {
  double start = 0.0;
  double x = 0.0, y = 0.0;
  double drift_x = 0.0, drift_y = 0.0;

  double pos_x(double t) const { return x + drift_x * (t - start); }
  double pos_y(double t) const { return y + drift_y * (t - start); }
};

// Fraction of the amplitude covered after tau seconds of a raised-cosine
// saccade of the given duration.
double raised_cosine_progress(double tau, double duration) {
  const double phase = 2.0 * std::numbers::pi * tau / duration;
  return tau / duration - std::sin(phase) / (2.0 * std::numbers::pi);
}

}  // namespace

void SyntheticUserProfile::check() const {
  if (!(eta >= 200.0 && eta <= 800.0)) throw ConfigError("profile eta must lie in [200, 800] deg/s");
  if (!(c >= 3.0 && c <= 12.0)) throw ConfigError("profile c must lie in [3, 12] deg");
  if (!(latency_mean_s >= 0.1 && latency_mean_s <= 0.4)) throw ConfigError("profile latency_mean_s must lie in [0.1, 0.4]");
  if (!(latency_std_s >= 0.0)) throw ConfigError("profile latency_std_s must be >= 0");
  if (!(fix_noise_deg >= 0.0)) throw ConfigError("profile fix_noise_deg must be >= 0");
  if (!(drift_deg_s >= 0.0)) throw ConfigError("profile drift_deg_s must be >= 0");
  if (!(undershoot_frac >= 0.0 && undershoot_frac <= 0.2)) throw ConfigError("profile undershoot_frac must lie in [0, 0.2]");
}

double peak_velocity(const SyntheticUserProfile& profile, double amplitude_deg) {
  if (!(amplitude_deg >= 0.0)) throw ConfigError("amplitude must be >= 0");
  return -profile.eta * std::expm1(-amplitude_deg / profile.c);
}

double SaccadeEvent::amplitude() const { return std::hypot(to_x - from_x, to_y - from_y); }

SimulationTrace simulate_trace(const SyntheticUserProfile& profile, const StimulusSchedule& sched, double rate_hz,
                               std::uint64_t session_seed) {
  profile.check();
  if (!(rate_hz >= 60.0 && rate_hz <= 2000.0)) throw ConfigError("simulation rate must lie in [60, 2000] Hz");
  if (sched.targets.empty() || !(sched.total_s > 0.0)) throw ConfigError("empty stimulus schedule");

  std::mt19937_64 rng(derive_seed({profile.seed, session_seed}));
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  const double total = sched.total_s;
  auto new_fixation = [&](double start, double x, double y) {
    const double a = angle(rng);
    return Fixation{start, x, y, profile.drift_deg_s * std::cos(a), profile.drift_deg_s * std::sin(a)};
  };

  SimulationTrace trace;
  std::vector<Fixation> fixations{new_fixation(0.0, 0.0, 0.0)};  // start at straight-ahead
  auto& saccades = trace.saccades;

  auto add_saccade = [&](double onset, double to_x, double to_y, bool corrective) {
    const Fixation& f = fixations.back();
    SaccadeEvent s;
    s.onset_s = onset;
    s.from_x = f.pos_x(onset);
    s.from_y = f.pos_y(onset);
    s.to_x = to_x;
    s.to_y = to_y;
    s.corrective = corrective;
    const double amp = s.amplitude();
    s.peak_velocity = peak_velocity(profile, amp);
    s.duration_s = 2.0 * amp / s.peak_velocity;
    saccades.push_back(s);
    fixations.push_back(new_fixation(onset + s.duration_s, to_x, to_y));
    return onset + s.duration_s;
  };

  double busy_until = 0.0;
  for (const auto& target : sched.targets) {
    const double latency =
        std::clamp(profile.latency_mean_s + profile.latency_std_s * unit_normal(rng), kMinLatencyS, kMaxLatencyS);
    const double start = std::max(target.onset_s + latency, busy_until);
    if (start >= total) break;

    const Fixation& f = fixations.back();
    const double dx = target.x_deg - f.pos_x(start);
    const double dy = target.y_deg - f.pos_y(start);
    if (std::hypot(dx, dy) < 1e-9) continue;

    const double land_x = target.x_deg - profile.undershoot_frac * dx;
    const double land_y = target.y_deg - profile.undershoot_frac * dy;
    busy_until = add_saccade(start, land_x, land_y, false);

    const double t_corr = busy_until + kCorrectionDelayS;
    if (t_corr < total) {
      const Fixation& landed = fixations.back();
      const double rx = target.x_deg - landed.pos_x(t_corr);
      const double ry = target.y_deg - landed.pos_y(t_corr);
      if (std::hypot(rx, ry) > 1e-9) busy_until = add_saccade(t_corr, target.x_deg, target.y_deg, true);
    }
  }

  auto& rec = trace.recording;
  rec.rate_hz = rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(total * rate_hz));
  rec.samples.resize(n);
  std::size_t k = 0;  // number of saccades with onset <= t
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate_hz;
    while (k < saccades.size() && saccades[k].onset_s <= t) ++k;
    GazeSample& s = rec.samples[i];
    s.t = t;
    if (k > 0 && t < saccades[k - 1].onset_s + saccades[k - 1].duration_s) {
      const auto& sac = saccades[k - 1];
      const double p = raised_cosine_progress(t - sac.onset_s, sac.duration_s);
      s.x = sac.from_x + p * (sac.to_x - sac.from_x);
      s.y = sac.from_y + p * (sac.to_y - sac.from_y);
    } else {
      s.x = fixations[k].pos_x(t);
      s.y = fixations[k].pos_y(t);
    }
  }

  if (profile.fix_noise_deg > 0.0) {
    const double sigma = profile.fix_noise_deg;
    for (auto& s : rec.samples) {
      s.x += std::clamp(sigma * unit_normal(rng), -3.0 * sigma, 3.0 * sigma);
      s.y += std::clamp(sigma * unit_normal(rng), -3.0 * sigma, 3.0 * sigma);
    }
  }
  return trace;
}

GazeRecording simulate_recording(const SyntheticUserProfile& profile, const StimulusSchedule& sched, double rate_hz,
                                 std::uint64_t session_seed) {
  return simulate_trace(profile, sched, rate_hz, session_seed).recording;
}

SyntheticUserProfile draw_profile(std::uint64_t master_seed, int user_index, const PopulationParams& pop) {
  std::mt19937_64 rng(derive_seed({master_seed, 0x70726f66ULL, static_cast<std::uint64_t>(user_index)}));
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  SyntheticUserProfile p;
  p.eta = uniform(pop.eta_min, pop.eta_max);
  p.c = uniform(pop.c_min, pop.c_max);
  p.latency_mean_s = uniform(pop.latency_mean_min, pop.latency_mean_max);
  p.latency_std_s = uniform(pop.latency_std_min, pop.latency_std_max);
  p.fix_noise_deg = std::exp(uniform(std::log(pop.fix_noise_min), std::log(pop.fix_noise_max)));
  p.drift_deg_s = uniform(pop.drift_min, pop.drift_max);
  p.undershoot_frac = uniform(pop.undershoot_min, pop.undershoot_max);
  p.seed = rng();
  return p;
}

std::vector<LabeledRecording> make_population(int n_users, int n_sessions, std::uint64_t master_seed,
                                              const ScheduleParams& sched_params, double rate_hz,
                                              const PopulationParams& pop) {
  if (n_users < 2) throw ConfigError("make_population needs n_users >= 2");
  if (n_sessions < 2) throw ConfigError("make_population needs n_sessions >= 2");

  std::vector<LabeledRecording> corpus;
  corpus.reserve(static_cast<std::size_t>(n_users) * n_sessions);
  for (int u = 0; u < n_users; ++u) {
    const SyntheticUserProfile base = draw_profile(master_seed, u, pop);
    char name[16];
    std::snprintf(name, sizeof(name), "U%02d", u);
    for (int s = 1; s <= n_sessions; ++s) {
      const auto uu = static_cast<std::uint64_t>(u);
      const auto ss = static_cast<std::uint64_t>(s);
      std::mt19937_64 rng(derive_seed({master_seed, 0x73657373ULL, uu, ss}));
      std::normal_distribution<double> wobble(1.0, pop.session_jitter);

      SyntheticUserProfile session = base;
      session.eta = std::clamp(base.eta * wobble(rng), 200.0, 800.0);
      session.c = std::clamp(base.c * wobble(rng), 3.0, 12.0);
      session.latency_mean_s = std::clamp(base.latency_mean_s * wobble(rng), 0.1, 0.4);
      session.fix_noise_deg = base.fix_noise_deg * std::max(0.0, wobble(rng));

      const StimulusSchedule sched = generate_schedule(rng(), sched_params);
      LabeledRecording item;
      item.user = name;
      item.session = s;
      item.recording = simulate_recording(session, sched, rate_hz, rng());
      item.recording.meta = {{"subject", name}, {"session", std::to_string(s)}, {"task", "RAN9"}};
      corpus.push_back(std::move(item));
    }
  }
  return corpus;
}

}  // namespace gazeauth
