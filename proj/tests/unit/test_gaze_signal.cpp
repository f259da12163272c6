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


#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gazeauth/error.hpp"
#include "gazeauth/gaze_signal.hpp"
#include "test_support.hpp"

using namespace gazeauth;
using gazeauth::testing::Gen;

namespace {

VelocitySequence seq_of(std::vector<double> vx, std::vector<double> vy) {
  VelocitySequence s;
  s.rate_hz = 125.0;
  s.vx = std::move(vx);
  s.vy = std::move(vy);
  s.valid.assign(s.vx.size(), 1);
  return s;
}

VelocitySequence zeros(std::size_t n) { return seq_of(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)); }

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments pooled_moments(const VelocitySequence& s) {
  std::vector<double> all(s.vx);
  all.insert(all.end(), s.vy.begin(), s.vy.end());
  Moments m;
  m.mean = std::accumulate(all.begin(), all.end(), 0.0) / all.size();
  for (double v : all) m.var += (v - m.mean) * (v - m.mean);
  m.var /= all.size();
  return m;
}

}  // namespace

TEST_CASE("decimate keeps every k-th sample") {
  Gen g(1);
  const GazeRecording rec = g.recording(1000.0, 9000);
  const GazeRecording out = decimate(rec, 125.0);
  CHECK(out.samples.size() == 1125);
  CHECK(out.rate_hz == 125.0);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    CHECK(out.samples[i].x == rec.samples[8 * i].x);
    CHECK(out.samples[i].t == rec.samples[8 * i].t);
  }
}

TEST_CASE("decimate output length is ceil(N/k)") {
  Gen g(2);
  for (int n : {3, 8, 9, 15, 16, 17, 1001}) {
    const auto out = decimate(g.recording(1000.0, n), 125.0);
    CHECK(out.samples.size() == static_cast<std::size_t>((n + 7) / 8));
  }
}

TEST_CASE("decimate to the source rate is the identity") {
  Gen g(3);
  const auto rec = g.recording(250.0, 400);
  CHECK(decimate(rec, 250.0) == rec);
}

TEST_CASE("decimate rejects non-integer ratios") {
  Gen g(4);
  CHECK_THROWS_AS(decimate(g.recording(120.0, 1080), 125.0), DecimationRatioError);
  CHECK_THROWS_AS(decimate(g.recording(1000.0, 100), 300.0), DecimationRatioError);
}

TEST_CASE("property: decimation factors compose") {
  Gen g(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int a = g.integer(1, 4), b = g.integer(1, 4);
    const double base = 62.5 * a * b;
    const auto rec = g.recording(base * g.integer(1, 3), g.integer(10, 700));
    const double r1 = rec.rate_hz / a, r2 = rec.rate_hz / (a * b);
    const auto twice = decimate(decimate(rec, r1), r2);
    const auto once = decimate(rec, r2);
    CHECK(twice.samples.size() == once.samples.size());
    bool same = true;
    for (std::size_t i = 0; i < once.samples.size(); ++i)
      same = same && twice.samples[i].x == once.samples[i].x && twice.samples[i].y == once.samples[i].y &&
             twice.samples[i].t == once.samples[i].t;
    CHECK(same);
  }
}

TEST_CASE("resample_linear interpolates between two samples") {
  GazeRecording rec;
  rec.rate_hz = 1.0;
  rec.samples = {{0.0, 0.0, 0.0, true}, {1.0, 8.0, 0.0, true}};
  const auto out = resample_linear(rec, 5.0);
  const std::vector<double> expected{0.0, 1.6, 3.2, 4.8, 6.4};
  REQUIRE(out.samples.size() >= expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(out.samples[i].t == doctest::Approx(0.2 * i).epsilon(1e-12));
    CHECK(out.samples[i].x == doctest::Approx(expected[i]).epsilon(1e-12));
  }
  // The source span is closed, so t = 1.0 is also produced.
  CHECK(out.samples.size() == 6);
  CHECK(out.samples.back().x == doctest::Approx(8.0));
}

TEST_CASE("resample_linear at the source rate is the identity") {
  Gen g(6);
  const auto rec = g.recording(125.0, 1125);
  const auto out = resample_linear(rec, 125.0);
  REQUIRE(out.samples.size() == rec.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.samples.size(); ++i)
    worst = std::max({worst, std::abs(out.samples[i].x - rec.samples[i].x), std::abs(out.samples[i].y - rec.samples[i].y)});
  CHECK(worst < 1e-9);
}

TEST_CASE("resample_linear 9 s at 120 Hz gives 1125 samples at 125 Hz") {
  Gen g(7);
  const auto out = resample_linear(g.recording(120.0, 1080), 125.0);
  // Brute-force enumeration: target instants k/125 that lie within half a
  // target period of the source span [0, 1079/120].
  const double span = 1079.0 / 120.0;
  std::size_t expected = 0;
  for (int k = 0; k < 5000; ++k)
    if (k / 125.0 <= span + 0.5 / 125.0) ++expected;
  CHECK(expected == 1125);
  CHECK(out.samples.size() == expected);
  CHECK(out.duration_s() == doctest::Approx(9.0));
}

TEST_CASE("resample_linear validity requires both bracketing samples") {
  GazeRecording rec;
  rec.rate_hz = 10.0;
  for (int i = 0; i < 5; ++i) rec.samples.push_back({i / 10.0, double(i), 0.0, i != 2});
  const auto out = resample_linear(rec, 20.0);
  // t = 0.15 lies between samples 1 and 2, t = 0.1 sits exactly on sample 1.
  CHECK(out.samples[2].valid);
  CHECK_FALSE(out.samples[3].valid);
  CHECK_FALSE(out.samples[4].valid);
  CHECK_FALSE(out.samples[5].valid);
  CHECK(out.samples[6].valid);
}

TEST_CASE("resample_linear rejects a non-positive rate") {
  Gen g(8);
  CHECK_THROWS_AS(resample_linear(g.recording(100.0, 10), 0.0), ConfigError);
  CHECK_THROWS_AS(resample_linear(g.recording(100.0, 10), -5.0), ConfigError);
}

TEST_CASE("property: resample_linear is exact for affine signals") {
  Gen g(9);
  for (int trial = 0; trial < 100; ++trial) {
    const double src_rate = g.uniform(60.0, 2000.0), dst_rate = g.uniform(60.0, 2000.0);
    const double x0 = g.uniform(-20, 20), vx = g.uniform(-50, 50), y0 = g.uniform(-20, 20), vy = g.uniform(-50, 50);
    GazeRecording rec;
    rec.rate_hz = src_rate;
    const int n = g.integer(2, 400);
    for (int i = 0; i < n; ++i) {
      const double t = i / src_rate;
      rec.samples.push_back({t, x0 + vx * t, y0 + vy * t, true});
    }
    double worst = 0.0;
    for (const auto& s : resample_linear(rec, dst_rate).samples)
      worst = std::max({worst, std::abs(s.x - (x0 + vx * s.t)), std::abs(s.y - (y0 + vy * s.t))});
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("to_velocity of a constant position is zero") {
  const auto v = to_velocity(gazeauth::testing::uniform_recording(
      125.0, 50, [](double) { return 3.0; }, [](double) { return -2.0; }));
  for (std::size_t i = 0; i < v.length(); ++i) {
    CHECK(v.vx[i] == 0.0);
    CHECK(v.vy[i] == 0.0);
  }
}

TEST_CASE("to_velocity of a 10 deg/s ramp") {
  const auto v = to_velocity(gazeauth::testing::uniform_recording(
      100.0, 100, [](double t) { return 10.0 * t; }, [](double) { return 0.0; }));
  for (std::size_t i = 1; i + 1 < v.length(); ++i) CHECK(v.vx[i] == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(v.vx.front() == v.vx[1]);
  CHECK(v.vx.back() == v.vx[v.length() - 2]);
}

TEST_CASE("to_velocity clamps a 40 degree step") {
  GazeRecording rec;
  rec.rate_hz = 125.0;
  for (int i = 0; i < 6; ++i) rec.samples.push_back({i / 125.0, i < 3 ? 0.0 : 40.0, i < 3 ? 0.0 : -40.0, true});
  const auto v = to_velocity(rec);
  // (40 - 0) * 125 / 2 = 2500 deg/s before clamping.
  CHECK(v.vx[2] == kMaxVelocityDegS);
  CHECK(v.vx[3] == kMaxVelocityDegS);
  CHECK(v.vy[2] == -kMaxVelocityDegS);
}

TEST_CASE("to_velocity imputes zero around invalid samples") {
  Gen g(10);
  auto rec = g.recording(125.0, 20);
  rec.samples[7].valid = false;
  const auto v = to_velocity(rec);
  for (std::size_t i : {6, 7, 8}) {
    CHECK(v.valid[i] == 0);
    CHECK(v.vx[i] == 0.0);
  }
  CHECK(v.valid[5] == 1);
  CHECK(v.valid[9] == 1);
}

TEST_CASE("to_velocity needs three samples") {
  Gen g(11);
  CHECK_THROWS_AS(to_velocity(g.recording(125.0, 2)), SignalTooShortError);
  CHECK_NOTHROW(to_velocity(g.recording(125.0, 3)));
}

TEST_CASE("property: time reversal negates and reverses velocity") {
  Gen g(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rec = g.recording(g.uniform(60, 1000), g.integer(3, 300));
    GazeRecording rev;
    rev.rate_hz = rec.rate_hz;
    const auto n = rec.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto s = rec.samples[n - 1 - i];
      s.t = i / rec.rate_hz;
      rev.samples.push_back(s);
    }
    const auto v = to_velocity(rec), w = to_velocity(rev);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ok = ok && w.vx[i] == -v.vx[n - 1 - i] && w.vy[i] == -v.vy[n - 1 - i];
    CHECK(ok);
  }
}

TEST_CASE("fit_norm_stats uses the population convention") {
  const std::vector<VelocitySequence> one{seq_of({0.0, 2.0}, {0.0, 2.0})};
  const auto s1 = fit_norm_stats(one);
  CHECK(s1.mean_x == doctest::Approx(1.0));
  CHECK(s1.std_x == doctest::Approx(1.0));

  const std::vector<VelocitySequence> two{seq_of({1.0, 1.0}, {1.0, 1.0}), seq_of({3.0, 3.0}, {3.0, 3.0})};
  const auto s2 = fit_norm_stats(two);
  CHECK(s2.mean_x == doctest::Approx(2.0));
  CHECK(s2.std_x == doctest::Approx(1.0));
  CHECK(s2.mean_y == doctest::Approx(2.0));
  CHECK(s2.std_y == doctest::Approx(1.0));
}

TEST_CASE("fit_norm_stats rejects degenerate corpora") {
  const std::vector<VelocitySequence> flat{zeros(10), zeros(5)};
  CHECK_THROWS_AS(fit_norm_stats(flat), DegenerateCorpusError);
  CHECK_THROWS_AS(fit_norm_stats(std::span<const VelocitySequence>()), DegenerateCorpusError);
}

TEST_CASE("fit_norm_stats ignores imputed samples") {
  auto s = seq_of({0.0, 2.0, 0.0}, {0.0, 2.0, 0.0});
  s.valid[2] = 0;
  const std::vector<VelocitySequence> corpus{s};
  const auto st = fit_norm_stats(corpus);
  CHECK(st.mean_x == doctest::Approx(1.0));
  CHECK(st.std_x == doctest::Approx(1.0));
}

TEST_CASE("normalize examples") {
  const auto s = seq_of({10.0, -3.0}, {4.0, 0.5});
  CHECK(normalize(s, NormStats{0.0, 0.0, 1.0, 1.0}) == s);
  const auto z = normalize(seq_of({10.0}, {10.0}), NormStats{10.0, 10.0, 5.0, 5.0});
  CHECK(z.vx[0] == 0.0);
  CHECK(z.vy[0] == 0.0);
}

TEST_CASE("normalizing the fitting corpus gives zero mean and unit std") {
  Gen g(13);
  std::vector<VelocitySequence> corpus;
  for (int k = 0; k < 5; ++k) corpus.push_back(to_velocity(g.recording(125.0, 300)));
  const auto stats = fit_norm_stats(corpus);
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  std::size_t n = 0;
  for (const auto& s : corpus) {
    const auto z = normalize(s, stats);
    for (std::size_t i = 0; i < z.length(); ++i) {
      sx += z.vx[i];
      sy += z.vy[i];
      sxx += z.vx[i] * z.vx[i];
      syy += z.vy[i] * z.vy[i];
      ++n;
    }
  }
  CHECK(std::abs(sx / n) < 1e-9);
  CHECK(std::abs(sy / n) < 1e-9);
  CHECK(std::abs(std::sqrt(sxx / n - (sx / n) * (sx / n)) - 1.0) < 1e-9);
  CHECK(std::abs(std::sqrt(syy / n - (sy / n) * (sy / n)) - 1.0) < 1e-9);
}

TEST_CASE("normalize zeroes imputed samples") {
  auto s = seq_of({0.0, 50.0, 0.0}, {0.0, 50.0, 0.0});
  s.valid[0] = 0;
  const auto z = normalize(s, NormStats{20.0, 20.0, 10.0, 10.0});
  CHECK(z.vx[0] == 0.0);
  CHECK(z.vx[2] == doctest::Approx(-2.0));
}

TEST_CASE("property: denormalize inverts normalize") {
  Gen g(14);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> vx(50), vy(50);
    for (auto& v : vx) v = g.uniform(-900, 900);
    for (auto& v : vy) v = g.uniform(-900, 900);
    const auto s = seq_of(vx, vy);
    const NormStats st{g.uniform(-50, 50), g.uniform(-50, 50), g.uniform(0.5, 200), g.uniform(0.5, 200)};
    const auto back = denormalize(normalize(s, st), st);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.length(); ++i)
      worst = std::max({worst, std::abs(back.vx[i] - s.vx[i]) / std::max(1.0, std::abs(s.vx[i])),
                        std::abs(back.vy[i] - s.vy[i]) / std::max(1.0, std::abs(s.vy[i]))});
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("add_noise with zero std leaves the input unchanged") {
  Gen g(15);
  const auto s = to_velocity(g.recording(125.0, 100));
  CHECK(add_noise(s, DegradationConfig{125.0, 0.0, 0.0, 3}) == s);
}

TEST_CASE("add_noise is deterministic in its seed") {
  const auto s = zeros(1000);
  const DegradationConfig cfg{125.0, 0.0, 0.1, 42};
  CHECK(add_noise(s, cfg) == add_noise(s, cfg));
  auto other = cfg;
  other.seed = 43;
  CHECK_FALSE(add_noise(s, cfg) == add_noise(s, other));
  CHECK(add_noise(s, cfg).length() == s.length());
}

TEST_CASE("add_noise rejects a negative std") {
  CHECK_THROWS_AS(add_noise(zeros(4), DegradationConfig{125.0, 0.0, -0.1, 1}), ConfigError);
}

TEST_CASE("add_noise moments over a million zeros") {
  const auto noisy = add_noise(zeros(500000), DegradationConfig{125.0, 0.0, 0.1, 2022});
  const auto m = pooled_moments(noisy);
  CHECK(std::abs(m.mean) <= 0.0005);
  CHECK(std::sqrt(m.var) >= 0.0995);
  CHECK(std::sqrt(m.var) <= 0.1005);
}

TEST_CASE("property: noise variances add") {
  Gen g(16);
  for (int trial = 0; trial < 5; ++trial) {
    const double s1 = g.uniform(0.05, 1.0), s2 = g.uniform(0.05, 1.0);
    const std::size_t n = 200000;
    const auto twice = add_noise(add_noise(zeros(n), {125.0, 0.0, s1, g.engine()()}), {125.0, 0.0, s2, g.engine()()});
    const double expected = s1 * s1 + s2 * s2;
    // Sample variance of 2n Gaussian draws has std expected * sqrt(2 / 2n); allow 5 of those.
    const double tol = 5.0 * expected * std::sqrt(2.0 / (2.0 * n));
    CHECK(std::abs(pooled_moments(twice).var - expected) <= tol);
  }
}

TEST_CASE("recording invariants") {
  Gen g(17);
  auto rec = g.recording(125.0, 10);
  CHECK_NOTHROW(rec.check());
  CHECK(rec.duration_s() == doctest::Approx(10.0 / 125.0));
  auto unsorted = rec;
  std::swap(unsorted.samples[3], unsorted.samples[4]);
  CHECK_THROWS_AS(unsorted.check(), ValidationError);
  auto short_rec = rec;
  short_rec.samples.resize(1);
  CHECK_THROWS_AS(short_rec.check(), ValidationError);
  auto bad_rate = rec;
  bad_rate.rate_hz = 0.0;
  CHECK_THROWS_AS(bad_rate.check(), ValidationError);
  auto nan_valid = rec;
  nan_valid.samples[2].x = std::nan("");
  CHECK_THROWS_AS(nan_valid.check(), ValidationError);
  nan_valid.samples[2].valid = false;
  CHECK_NOTHROW(nan_valid.check());
}
