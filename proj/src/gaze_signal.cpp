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

#include "gazeauth/gaze_signal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gazeauth/error.hpp"

namespace gazeauth {

double GazeRecording::valid_fraction() const {
  if (samples.empty()) return 0.0;
  const auto n = std::count_if(samples.begin(), samples.end(), [](const GazeSample& s) { return s.valid; });
  return static_cast<double>(n) / samples.size();
}

void GazeRecording::check() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ValidationError("recording rate_hz must be > 0");
  if (samples.size() < 2) throw ValidationError("recording needs at least 2 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.t >= 0.0) || !std::isfinite(s.t)) throw ValidationError("sample time must be finite and >= 0");
    if (i > 0 && !(s.t > samples[i - 1].t)) throw ValidationError("sample times must be strictly increasing");
    if (s.valid && !(std::isfinite(s.x) && std::isfinite(s.y)))
      throw ValidationError("valid samples must have finite coordinates");
  }
}

GazeRecording decimate(const GazeRecording& rec, double target_rate_hz) {
  if (!(target_rate_hz > 0.0)) throw ConfigError("target_rate_hz must be > 0");
  const double ratio = rec.rate_hz / target_rate_hz;
  const double k_round = std::round(ratio);
  if (k_round < 1.0 || std::abs(ratio - k_round) > 1e-9 * ratio) {
    throw DecimationRatioError("source rate " + std::to_string(rec.rate_hz) + " Hz is not an integer multiple of " +
                               std::to_string(target_rate_hz) + " Hz; use resample_linear");
  }
  const auto k = static_cast<std::size_t>(k_round);
  GazeRecording out;
  out.rate_hz = target_rate_hz;
  out.meta = rec.meta;
  out.samples.reserve((rec.samples.size() + k - 1) / k);
  for (std::size_t i = 0; i < rec.samples.size(); i += k) out.samples.push_back(rec.samples[i]);
  return out;
}

GazeRecording resample_linear(const GazeRecording& rec, double target_rate_hz) {
  if (!(target_rate_hz > 0.0) || !std::isfinite(target_rate_hz)) throw ConfigError("target_rate_hz must be > 0");
  if (rec.samples.size() < 2) throw SignalTooShortError("resample_linear needs at least 2 samples");

  const auto& src = rec.samples;
  const double t0 = src.front().t;
  const double span = src.back().t - t0;
  const auto count = static_cast<std::size_t>(std::llround(span * target_rate_hz)) + 1;

  GazeRecording out;
  out.rate_hz = target_rate_hz;
  out.meta = rec.meta;
  out.samples.reserve(count);

  std::size_t j = 0;  // src[j].t <= t < src[j + 1].t
  for (std::size_t i = 0; i < count; ++i) {
    const double t = t0 + static_cast<double>(i) / target_rate_hz;
    while (j + 1 < src.size() && src[j + 1].t <= t) ++j;
    // Past the last source sample the final segment is extended linearly.
    const std::size_t k = std::min(j, src.size() - 2);
    const auto& a = src[k];
    const auto& b = src[k + 1];
    const double w = (t - a.t) / (b.t - a.t);
    GazeSample s;
    s.t = t;
    if (w == 0.0) {
      s.x = a.x;
      s.y = a.y;
      s.valid = a.valid;
    } else if (w == 1.0) {
      s.x = b.x;
      s.y = b.y;
      s.valid = b.valid;
    } else {
      s.x = a.x + w * (b.x - a.x);
      s.y = a.y + w * (b.y - a.y);
      s.valid = a.valid && b.valid;
    }
    out.samples.push_back(s);
  }
  return out;
}

VelocitySequence to_velocity(const GazeRecording& rec) {
  const auto n = rec.samples.size();
  if (n < 3) throw SignalTooShortError("to_velocity needs at least 3 samples, got " + std::to_string(n));
  if (!(rec.rate_hz > 0.0)) throw ConfigError("recording rate_hz must be > 0");

  const auto& s = rec.samples;
  const double half_rate = rec.rate_hz / 2.0;
  auto clamp = [](double v) { return std::clamp(v, -kMaxVelocityDegS, kMaxVelocityDegS); };

  VelocitySequence out;
  out.rate_hz = rec.rate_hz;
  out.vx.assign(n, 0.0);
  out.vy.assign(n, 0.0);
  out.valid.assign(n, 1);

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(s[i - 1].valid && s[i].valid && s[i + 1].valid)) {
      out.valid[i] = 0;
      continue;
    }
    out.vx[i] = clamp((s[i + 1].x - s[i - 1].x) * half_rate);
    out.vy[i] = clamp((s[i + 1].y - s[i - 1].y) * half_rate);
  }
  // endpoints copy their neighbour
  out.vx[0] = out.vx[1];
  out.vy[0] = out.vy[1];
  out.valid[0] = out.valid[1] && s[0].valid;
  out.vx[n - 1] = out.vx[n - 2];
  out.vy[n - 1] = out.vy[n - 2];
  out.valid[n - 1] = out.valid[n - 2] && s[n - 1].valid;
  for (std::size_t i : {std::size_t{0}, n - 1}) {
    if (!out.valid[i]) out.vx[i] = out.vy[i] = 0.0;
  }
  return out;
}

NormStats fit_norm_stats(std::span<const VelocitySequence> corpus) {
  if (corpus.empty()) throw DegenerateCorpusError("cannot fit normalization statistics on an empty corpus");
  // Two passes for numerical stability.
  double sum_x = 0.0, sum_y = 0.0;
  std::size_t count = 0;
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i < seq.length(); ++i) {
      if (!seq.valid.empty() && !seq.valid[i]) continue;
      sum_x += seq.vx[i];
      sum_y += seq.vy[i];
      ++count;
    }
  }
  if (count == 0) throw DegenerateCorpusError("corpus has no valid samples");
  NormStats stats;
  stats.mean_x = sum_x / count;
  stats.mean_y = sum_y / count;
  double ss_x = 0.0, ss_y = 0.0;
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i < seq.length(); ++i) {
      if (!seq.valid.empty() && !seq.valid[i]) continue;
      ss_x += (seq.vx[i] - stats.mean_x) * (seq.vx[i] - stats.mean_x);
      ss_y += (seq.vy[i] - stats.mean_y) * (seq.vy[i] - stats.mean_y);
    }
  }
  stats.std_x = std::sqrt(ss_x / count);
  stats.std_y = std::sqrt(ss_y / count);
  if (!(stats.std_x > 0.0) || !(stats.std_y > 0.0))
    throw DegenerateCorpusError("zero-variance velocity channel in corpus");
  return stats;
}

namespace {

void check_stats(const NormStats& stats) {
  if (!(stats.std_x > 0.0) || !(stats.std_y > 0.0)) throw ConfigError("normalization std must be > 0");
}

bool is_valid(const VelocitySequence& seq, std::size_t i) { return seq.valid.empty() || seq.valid[i]; }

}  // namespace

VelocitySequence normalize(const VelocitySequence& seq, const NormStats& stats) {
  check_stats(stats);
  VelocitySequence out = seq;
  for (std::size_t i = 0; i < out.length(); ++i) {
    if (!is_valid(seq, i)) {
      out.vx[i] = out.vy[i] = 0.0;  // post-normalization mean
      continue;
    }
    out.vx[i] = (seq.vx[i] - stats.mean_x) / stats.std_x;
    out.vy[i] = (seq.vy[i] - stats.mean_y) / stats.std_y;
  }
  return out;
}

VelocitySequence denormalize(const VelocitySequence& seq, const NormStats& stats) {
  check_stats(stats);
  VelocitySequence out = seq;
  for (std::size_t i = 0; i < out.length(); ++i) {
    out.vx[i] = seq.vx[i] * stats.std_x + stats.mean_x;
    out.vy[i] = seq.vy[i] * stats.std_y + stats.mean_y;
  }
  return out;
}

VelocitySequence add_noise(const VelocitySequence& seq, const DegradationConfig& cfg) {
  if (!(cfg.noise_std >= 0.0) || !std::isfinite(cfg.noise_std)) throw ConfigError("noise_std must be >= 0");
  VelocitySequence out = seq;
  if (cfg.noise_std == 0.0) {
    // degenerate Gaussian
    for (std::size_t i = 0; i < out.length(); ++i) {
      out.vx[i] += cfg.noise_mean;
      out.vy[i] += cfg.noise_mean;
    }
    return out;
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(cfg.noise_mean, cfg.noise_std);
  for (std::size_t i = 0; i < out.length(); ++i) {
    out.vx[i] += gauss(rng);
    out.vy[i] += gauss(rng);
  }
  return out;
}

}  // namespace gazeauth
