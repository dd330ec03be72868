// tests/test_scene.cc

// Copyright 2026  The jnfkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "jnfkd/manifest.h"
#include "jnfkd/scene.h"
#include "jnfkd/synthetic.h"
#include "oracles.h"

using namespace jnfkd;

TEST_CASE("default array satisfies its invariants") {
  ArrayGeometry g = ArrayGeometry::default_array();
  CHECK(g.num_mics() == 5);
  CHECK(g.front_index == 0);
  CHECK(g.center_index == 4);
  CHECK(point_distance(g.mic_positions[0], g.mic_positions[2]) ==
        doctest::Approx(0.1));

  ArrayGeometry bad = g;
  bad.mic_positions[1] = {0.3, 0.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = g;
  bad.front_index = 7;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = g;
  bad.mic_positions.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("talker grid has 65 cells drawn uniformly") {
  Rng rng(51);
  std::map<std::pair<double, double>, int> counts;
  const int n = 65000;
  for (int i = 0; i < n; ++i) {
    SourcePosition p = sample_talker_position(rng);
    CHECK(p.distance_m == 5.0);
    CHECK(p.azimuth_deg >= -30.0);
    CHECK(p.azimuth_deg <= 30.0);
    CHECK(std::fmod(p.azimuth_deg + 30.0, 5.0) == 0.0);
    CHECK(p.elevation_deg >= -10.0);
    CHECK(p.elevation_deg <= 10.0);
    counts[{p.azimuth_deg, p.elevation_deg}]++;
  }
  CHECK(counts.size() == 65);
  // multinomial: each cell is binomial(n, 1/65); allow 3 sigma
  const double expect = n / 65.0;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / 65.0));
  int outliers = 0;
  for (const auto &[cell, c] : counts)
    if (std::abs(c - expect) > 3.0 * sigma) outliers++;
  // with 65 cells at 3 sigma, about 0.2 expected outliers; allow 2
  CHECK(outliers <= 2);
}

TEST_CASE("noise grid has 8 cells at elevation zero drawn uniformly") {
  Rng rng(52);
  std::map<double, int> counts;
  const int n = 16000;
  for (int i = 0; i < n; ++i) {
    SourcePosition p = sample_noise_position(rng, 2.0);
    CHECK(p.elevation_deg == 0.0);
    CHECK(p.distance_m == 2.0);
    CHECK(std::fmod(p.azimuth_deg, 45.0) == 0.0);
    CHECK(p.azimuth_deg < 360.0);
    counts[p.azimuth_deg]++;
  }
  CHECK(counts.size() == 8);
  const double expect = n / 8.0;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / 8.0));
  for (const auto &[az, c] : counts) CHECK(std::abs(c - expect) <= 4.0 * sigma);
}

TEST_CASE("source equidistant from two microphones gives identical channels") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Rng rng(53);
  Waveform s = synth_speech(0.5, rng);
  // +y source is equidistant from the +x and -x circle microphones
  SourcePosition pos{90.0, 0.0, 2.0};
  MultichannelWaveform out = propagate_free_field(s, pos, g);
  REQUIRE(out.num_channels() == 5);
  for (size_t i = 0; i < out.num_samples(); ++i)
    CHECK(std::abs(out.channels[0][i] - out.channels[2][i]) <= 1e-9);
}

TEST_CASE("inter-channel delay matches geometry through cross-correlation") {
  // two microphones 10 cm apart along the propagation axis
  ArrayGeometry g = ArrayGeometry::default_array();
  g.mic_positions[0] = {0.05, 0.0, 0.0};
  g.mic_positions[2] = {-0.05, 0.0, 0.0};
  Rng rng(54);
  Waveform s = synth_speech(1.0, rng);
  SourcePosition pos{0.0, 0.0, 3.0};  // on the +x axis
  MultichannelWaveform out = propagate_free_field(s, pos, g);

  const double measured =
      oracles::xcorr_delay(out.channels[0], out.channels[2], 16);
  const double expected = 0.1 / kSpeedOfSound * kSampleRate;  // 4.665 samples
  CHECK(std::abs(measured - expected) < 0.02);

  // fractional sub-sample case: move the far microphone off-grid
  g.mic_positions[2] = {-0.0437, 0.0, 0.0};
  out = propagate_free_field(s, pos, g);
  const double expected2 = 0.0937 / kSpeedOfSound * kSampleRate;
  const double measured2 =
      oracles::xcorr_delay(out.channels[0], out.channels[2], 16);
  CHECK(std::abs(measured2 - expected2) < 0.02);
}

TEST_CASE("channel energies follow the inverse squared-distance law") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Rng rng(55);
  Waveform s = synth_speech(1.0, rng);
  SourcePosition pos{0.0, 0.0, 4.0};
  MultichannelWaveform out = propagate_free_field(s, pos, g);
  const double d_front = 4.0 - 0.05;
  const double d_back = 4.0 + 0.05;
  const double ratio = signal_energy(out.channels[0]) / signal_energy(out.channels[2]);
  CHECK(ratio == doctest::Approx((d_back * d_back) / (d_front * d_front)).epsilon(1e-3));

  MultichannelWaveform flat = propagate_free_field(s, pos, g, false);
  const double ratio_flat =
      signal_energy(flat.channels[0]) / signal_energy(flat.channels[2]);
  CHECK(ratio_flat == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("coincident source is rejected") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Waveform s;
  s.samples.assign(100, 0.5);
  SourcePosition pos{0.0, 0.0, 0.05};  // exactly on the front microphone
  CHECK_THROWS_AS(propagate_free_field(s, pos, g), std::invalid_argument);
}

TEST_CASE("room response application matches the direct convolution oracle") {
  Rng rng(56);
  MultichannelWaveform x;
  x.channels.assign(2, std::vector<double>(2000));
  for (auto &ch : x.channels)
    for (auto &v : ch) v = rng.uniform(-1.0, 1.0);

  RoomImpulseResponse rir;
  rir.taps.assign(2, std::vector<double>(64));
  for (auto &ch : rir.taps)
    for (auto &v : ch) v = rng.uniform(-0.5, 0.5);

  MultichannelWaveform y = apply_rir(x, rir);
  for (int m = 0; m < 2; ++m) {
    auto expected = oracles::naive_convolve_truncated(x.channels[m], rir.taps[m]);
    double max_diff = 0.0;
    for (size_t i = 0; i < expected.size(); ++i)
      max_diff = std::max(max_diff, std::abs(expected[i] - y.channels[m][i]));
    CHECK(max_diff <= 1e-10);
  }

  // identity and pure-delay responses
  MultichannelWaveform id = apply_rir(x, RoomImpulseResponse::identity(2));
  CHECK(id.channels == x.channels);

  RoomImpulseResponse delayed;
  delayed.taps.assign(2, std::vector<double>(8, 0.0));
  delayed.taps[0][7] = 1.0;
  delayed.taps[1][7] = 1.0;
  MultichannelWaveform d = apply_rir(x, delayed);
  for (int m = 0; m < 2; ++m)
    for (size_t i = 7; i < 2000; ++i)
      CHECK(d.channels[m][i] == x.channels[m][i - 7]);

  RoomImpulseResponse mismatched = RoomImpulseResponse::identity(3);
  CHECK_THROWS_AS(apply_rir(x, mismatched), std::invalid_argument);
}

TEST_CASE("snr gain closed forms") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Rng rng(57);
  const size_t n = 4000;
  MultichannelWaveform x, v;
  x.channels.assign(5, std::vector<double>(n));
  v.channels.assign(5, std::vector<double>(n));
  for (auto &ch : x.channels)
    for (auto &s : ch) s = rng.uniform(-1.0, 1.0);
  for (auto &ch : v.channels)
    for (auto &s : ch) s = rng.uniform(-1.0, 1.0);

  // normalize both front channels to unit energy, then check g directly
  auto normalize = [](std::vector<double> &ch) {
    const double e = std::sqrt(signal_energy(ch));
    for (auto &s : ch) s /= e;
  };
  normalize(x.channels[g.front_index]);
  normalize(v.channels[g.front_index]);

  MixtureExample ex0 = mix_at_snr(x, v, 0.0, g);
  for (size_t i = 0; i < n; ++i) {
    const double gi = (ex0.y.channels[0][i] - ex0.x.channels[0][i]) / v.channels[0][i];
    CHECK(gi == doctest::Approx(1.0).epsilon(1e-9));
  }
  MixtureExample ex10 = mix_at_snr(x, v, 10.0, g);
  const double g10 = (ex10.y.channels[0][0] - ex10.x.channels[0][0]) / v.channels[0][0];
  CHECK(g10 == doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-9));

  MultichannelWaveform silent = v;
  for (auto &ch : silent.channels) ch.assign(n, 0.0);
  CHECK_THROWS_AS(mix_at_snr(x, silent, 0.0, g), std::runtime_error);
}

TEST_CASE("measured snr equals requested within 1e-9 dB over random cases") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Rng rng(58);
  for (int rep = 0; rep < 100; ++rep) {
    const size_t n = 1000 + rng.uniform_int(3000);
    MultichannelWaveform x, v;
    x.channels.assign(5, std::vector<double>(n));
    v.channels.assign(5, std::vector<double>(n));
    for (auto &ch : x.channels)
      for (auto &s : ch) s = rng.uniform(-1.0, 1.0);
    for (auto &ch : v.channels)
      for (auto &s : ch) s = rng.uniform(-0.3, 0.3);
    const double snr = rng.uniform(-5.0, 15.0);
    MixtureExample ex = mix_at_snr(x, v, snr, g);

    std::vector<double> noise(n);
    for (size_t i = 0; i < n; ++i)
      noise[i] = ex.y.channels[g.front_index][i] - ex.x.channels[g.front_index][i];
    const double measured = 10.0 * std::log10(signal_energy(ex.x.channels[g.front_index]) /
                                              signal_energy(noise));
    CHECK(std::abs(measured - snr) <= 1e-9);
  }
}

TEST_CASE("full scene pipeline: additivity, determinism, zero-gain identity") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Rng data_rng(59);
  Waveform speech = synth_speech(1.0, data_rng);
  Waveform noise = synth_noise(1.0, data_rng);
  RoomImpulseResponse rir = synth_rir(5, data_rng);

  SceneOptions opts;
  Rng rng_a = Rng::derive(60, "scene", 3);
  MixtureExample a = make_example(speech, noise, rir, 5.0, rng_a, g, opts);
  Rng rng_b = Rng::derive(60, "scene", 3);
  MixtureExample b = make_example(speech, noise, rir, 5.0, rng_b, g, opts);

  CHECK(a.y.channels == b.y.channels);  // bit-identical rerun
  CHECK(a.x.channels == b.x.channels);
  CHECK(a.s.samples == b.s.samples);
  CHECK(a.talker_pos.azimuth_deg == b.talker_pos.azimuth_deg);

  // y - x must be exactly a scalar multiple of the propagated noise
  {
    Waveform noise_trimmed = noise;
    noise_trimmed.samples.resize(speech.samples.size());
    MultichannelWaveform v_ff = propagate_free_field(noise_trimmed, a.noise_pos, g);
    double num = 0.0, den = 0.0;  // least-squares gain estimate
    for (size_t i = 0; i < a.y.channels[0].size(); ++i) {
      num += (a.y.channels[0][i] - a.x.channels[0][i]) * v_ff.channels[0][i];
      den += v_ff.channels[0][i] * v_ff.channels[0][i];
    }
    const double gain = num / den;
    for (int m = 0; m < 5; ++m)
      for (size_t i = 0; i < a.y.channels[m].size(); ++i)
        CHECK(std::abs((a.y.channels[m][i] - a.x.channels[m][i]) -
                       gain * v_ff.channels[m][i]) <= 1e-12);
  }

  // measured SNR at the front microphone survives the full pipeline
  std::vector<double> vn(a.y.channels[0].size());
  for (size_t i = 0; i < vn.size(); ++i)
    vn[i] = a.y.channels[g.front_index][i] - a.x.channels[g.front_index][i];
  const double snr = 10.0 * std::log10(signal_energy(a.x.channels[g.front_index]) /
                                       signal_energy(vn));
  CHECK(std::abs(snr - 5.0) <= 1e-9);

  // zero noise gain with the identity response collapses y to x and x to the
  // free-field propagation
  SceneOptions quiet;
  quiet.noise_gain_override = 0.0;
  Rng rng_c = Rng::derive(60, "scene", 4);
  MixtureExample c = make_example(speech, noise, RoomImpulseResponse::identity(5),
                                  0.0, rng_c, g, quiet);
  CHECK(c.y.channels == c.x.channels);
  // s matches the center channel of x exactly in this configuration
  CHECK(c.s.samples == c.x.channels[g.center_index]);
}

TEST_CASE("clean target is the anechoic center-microphone arrival") {
  ArrayGeometry g = ArrayGeometry::default_array();
  Rng rng(61);
  Waveform speech = synth_speech(0.5, rng);
  Waveform noise = synth_noise(0.5, rng);
  RoomImpulseResponse rir = synth_rir(5, rng);
  Rng scene_rng(62);
  MixtureExample ex = make_example(speech, noise, rir, 0.0, scene_rng, g);

  // the same positions re-derived from an identical stream
  Rng replay(62);
  SourcePosition talker = sample_talker_position(replay);
  MultichannelWaveform ff = propagate_free_field(speech, talker, g);
  CHECK(ex.s.samples == ff.channels[g.center_index]);
}

TEST_CASE("manifest round trip and validation") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "jnfkd_manifest.jsonl").string();
  std::vector<ManifestEntry> entries = {
      {"a.wav", SourceRole::kSpeech, DataSplit::kTrain},
      {"b.wav", SourceRole::kNoise, DataSplit::kVal},
      {"c.wav", SourceRole::kRir, DataSplit::kTest},
  };
  write_manifest(path, entries);
  auto back = read_manifest(path);
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back[i].path == entries[i].path);
    CHECK(back[i].role == entries[i].role);
    CHECK(back[i].split == entries[i].split);
  }
  fs::remove(path);

  CHECK_THROWS_AS(parse_source_role("video"), std::runtime_error);
  CHECK_THROWS_AS(parse_data_split("dev"), std::runtime_error);
  CHECK_THROWS_AS(read_manifest("/nonexistent/manifest.jsonl"), std::runtime_error);
}

TEST_CASE("rendered examples survive the directory round trip") {
  namespace fs = std::filesystem;
  const std::string root = (fs::temp_directory_path() / "jnfkd_examples").string();
  fs::remove_all(root);

  ArrayGeometry g = ArrayGeometry::default_array();
  Rng rng(63);
  Waveform speech = synth_speech(0.3, rng);
  Waveform noise = synth_noise(0.3, rng);
  Rng scene_rng(64);
  MixtureExample ex = make_example(speech, noise, synth_rir(5, rng), 3.0, scene_rng, g);
  ex.seed = 64;

  write_example(root + "/ex_000", ex);
  write_example(root + "/ex_001", ex);
  auto dirs = list_example_dirs(root);
  REQUIRE(dirs.size() == 2);

  MixtureExample back = read_example(dirs[0]);
  CHECK(back.snr_db == 3.0);
  CHECK(back.seed == 64);
  CHECK(back.talker_pos.azimuth_deg == ex.talker_pos.azimuth_deg);
  CHECK(back.noise_pos.distance_m == ex.noise_pos.distance_m);
  REQUIRE(back.y.num_channels() == 5);
  REQUIRE(back.y.num_samples() == ex.y.num_samples());
  // float32 storage: the round trip loses only double->float precision
  for (int m = 0; m < 5; ++m)
    for (size_t i = 0; i < ex.y.num_samples(); ++i)
      CHECK(back.y.channels[m][i] ==
            static_cast<double>(static_cast<float>(ex.y.channels[m][i])));
  fs::remove_all(root);
}

TEST_CASE("synthetic generators are deterministic and finite") {
  Rng a(70), b(70);
  CHECK(synth_speech(0.25, a).samples == synth_speech(0.25, b).samples);
  CHECK(synth_noise(0.25, a, NoiseKind::kPink).samples ==
        synth_noise(0.25, b, NoiseKind::kPink).samples);
  auto ra = synth_rir(5, a), rb = synth_rir(5, b);
  CHECK(ra.taps == rb.taps);
  for (const auto &t : ra.taps) {
    CHECK(all_finite(t));
    CHECK(t[0] == 1.0);
  }
  Rng c(71);
  CHECK(all_finite(synth_speech(1.0, c).samples));
  CHECK_THROWS_AS(synth_speech(0.0, c), std::invalid_argument);
}
