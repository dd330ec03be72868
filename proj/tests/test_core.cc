// tests/test_core.cc

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
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>

#include "jnfkd/rng.h"
#include "jnfkd/wav.h"

using namespace jnfkd;

namespace {

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("identical seeds give identical streams; different seeds diverge") {
  Rng a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("derived streams depend on purpose and index") {
  Rng a = Rng::derive(7, "scene", 0);
  Rng b = Rng::derive(7, "scene", 0);
  Rng c = Rng::derive(7, "scene", 1);
  Rng d = Rng::derive(7, "init", 0);
  const uint64_t va = a.next_u64();
  CHECK(va == b.next_u64());
  CHECK(va != c.next_u64());
  CHECK(va != d.next_u64());
}

TEST_CASE("uniform stays in range with a sane mean") {
  Rng rng(5);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    sum += v;
  }
  // mean of U[0,1) over n draws: sigma = 1/sqrt(12 n), allow 4 sigma
  CHECK(std::abs(sum / n - 0.5) <= 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("uniform_int covers all residues without bias") {
  Rng rng(9);
  const uint64_t m = 13;
  std::vector<int> counts(m, 0);
  const int n = 130000;
  for (int i = 0; i < n; ++i) counts[rng.uniform_int(m)]++;
  const double expect = double(n) / m;
  for (uint64_t r = 0; r < m; ++r) {
    // binomial sigma ~ sqrt(n p (1-p)), allow 5 sigma
    const double sigma = std::sqrt(expect * (1.0 - 1.0 / m));
    CHECK(std::abs(counts[r] - expect) <= 5.0 * sigma);
  }
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("gaussian has near-zero mean and unit variance") {
  Rng rng(17);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.gaussian();
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) <= 0.02);
}

TEST_CASE("permutation is a bijection and depends on the seed") {
  Rng rng(21);
  auto p = rng.permutation(50);
  std::set<size_t> seen(p.begin(), p.end());
  CHECK(seen.size() == 50);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 49);

  Rng rng2(21);
  CHECK(rng2.permutation(50) == p);
}

TEST_CASE("float32 wav round trip is lossless for float32 payloads") {
  FileGuard g{temp_path("jnfkd_test_f32.wav")};
  Rng rng(31);
  MultichannelWaveform x;
  x.sample_rate = 16000;
  x.channels.resize(3);
  for (auto &ch : x.channels) {
    ch.resize(777);
    for (auto &v : ch) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  }
  write_wav(g.path, x, WavFormat::kFloat32);
  MultichannelWaveform y = read_wav(g.path);
  CHECK(y.sample_rate == 16000);
  REQUIRE(y.channels.size() == 3);
  for (size_t m = 0; m < 3; ++m) {
    REQUIRE(y.channels[m].size() == 777);
    for (size_t i = 0; i < 777; ++i) CHECK(y.channels[m][i] == x.channels[m][i]);
  }
}

TEST_CASE("pcm16 wav round trip quantizes to 16 bits") {
  FileGuard g{temp_path("jnfkd_test_p16.wav")};
  Rng rng(32);
  Waveform x;
  x.sample_rate = 16000;
  x.samples.resize(500);
  for (auto &v : x.samples) v = rng.uniform(-0.9, 0.9);
  write_wav(g.path, x, WavFormat::kPcm16);
  Waveform y = read_wav_mono(g.path);
  REQUIRE(y.samples.size() == x.samples.size());
  for (size_t i = 0; i < x.samples.size(); ++i)
    CHECK(std::abs(y.samples[i] - x.samples[i]) <= 1.0 / 32767.0);
}

TEST_CASE("pcm16 clamps out-of-range samples instead of wrapping") {
  FileGuard g{temp_path("jnfkd_test_clamp.wav")};
  Waveform x;
  x.sample_rate = 16000;
  x.samples = {1.5, -1.5, 0.0};
  write_wav(g.path, x, WavFormat::kPcm16);
  Waveform y = read_wav_mono(g.path);
  CHECK(y.samples[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(y.samples[1] == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(y.samples[2] == 0.0);
}

TEST_CASE("sample-rate check and channel-count check reject mismatches") {
  FileGuard g{temp_path("jnfkd_test_rate.wav")};
  MultichannelWaveform x;
  x.sample_rate = 8000;
  x.channels = {{0.1, 0.2}, {0.3, 0.4}};
  write_wav(g.path, x);
  CHECK_THROWS_WITH_AS(read_wav_checked(g.path, 16000),
                       doctest::Contains("resampling is not supported"),
                       std::runtime_error);
  CHECK_THROWS_AS(read_wav_mono(g.path), std::runtime_error);
  CHECK_NOTHROW(read_wav_checked(g.path, 8000));
}

TEST_CASE("reading a missing file fails cleanly") {
  CHECK_THROWS_AS(read_wav(temp_path("jnfkd_does_not_exist.wav")), std::runtime_error);
}
