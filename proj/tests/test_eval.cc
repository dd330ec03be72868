// tests/test_eval.cc

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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jnfkd/evalproto.h"
#include "jnfkd/losses.h"
#include "jnfkd/metrics.h"
#include "jnfkd/report.h"
#include "jnfkd/rng.h"

namespace fs = std::filesystem;
using namespace jnfkd;

namespace {

double oracle_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double oracle_variance(const std::vector<double> &v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / v.size();
}

Waveform random_wave(size_t n, uint64_t seed) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  for (auto &x : w.samples) x = rng.gaussian() * 0.1;
  return w;
}

FTJNF tiny_model(uint64_t seed) {
  ModelConfig cfg;
  cfg.f_hidden = 8;
  cfg.t_hidden = 4;
  cfg.num_mics = 5;
  cfg.size_label = "tiny";
  FTJNF model(cfg);
  Rng rng(seed);
  model.init(rng);
  return model;
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "jnfkd_eval_test";
  fs::create_directories(dir);
  return dir;
}

// Writes an executable shell script used as a fake external scorer.
std::string fake_adapter(const std::string &name, const std::string &body) {
  const fs::path path = scratch_dir() / name;
  {
    std::ofstream out(path, std::ios::trunc);
    out << "#!/bin/sh\n" << body << "\n";
  }
  fs::permissions(path, fs::perms::owner_all | fs::perms::group_read |
                            fs::perms::others_read);
  return path.string();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("median and population variance match a brute-force oracle") {
  Rng rng(401);
  for (size_t n = 1; n <= 12; ++n) {
    std::vector<double> v(n);
    for (auto &x : v) x = rng.uniform(-5.0, 5.0);
    CHECK(median(v) == doctest::Approx(oracle_median(v)).epsilon(1e-12));
    CHECK(population_variance(v) ==
          doctest::Approx(oracle_variance(v)).epsilon(1e-12));
  }
  CHECK(median({3.0}) == 3.0);
  CHECK(median({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(2.5));
  CHECK(population_variance({2.0, 2.0, 2.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(median({}), std::invalid_argument);
  CHECK_THROWS_AS(population_variance({}), std::invalid_argument);
}

TEST_CASE("si_sdr handles exact, scaled, orthogonal and degenerate inputs") {
  const Waveform ref = random_wave(4000, 402);

  CHECK(si_sdr(ref, ref) == doctest::Approx(kSiSdrCapDb));

  Waveform scaled = ref;
  for (auto &x : scaled.samples) x *= 2.0;
  CHECK(si_sdr(scaled, ref) == doctest::Approx(kSiSdrCapDb));
  Waveform negated = ref;
  for (auto &x : negated.samples) x *= -3.0;
  CHECK(si_sdr(negated, ref) == doctest::Approx(kSiSdrCapDb));

  // Gram-Schmidt noise at a tenth of the reference energy lands exactly at
  // 10 dB because the projection leaves the noise untouched.
  Waveform probe = random_wave(4000, 403);
  double dot = 0.0, ref_e = 0.0, probe_e = 0.0;
  for (size_t i = 0; i < ref.samples.size(); ++i) {
    dot += probe.samples[i] * ref.samples[i];
    ref_e += ref.samples[i] * ref.samples[i];
  }
  Waveform noise = probe;
  for (size_t i = 0; i < noise.samples.size(); ++i)
    noise.samples[i] -= dot / ref_e * ref.samples[i];
  for (double x : noise.samples) probe_e += x * x;
  const double gain = std::sqrt(0.1 * ref_e / probe_e);
  Waveform est = ref;
  for (size_t i = 0; i < est.samples.size(); ++i)
    est.samples[i] += gain * noise.samples[i];
  CHECK(si_sdr(est, ref) == doctest::Approx(10.0).epsilon(1e-9));

  // estimate orthogonal to the reference: zero projection, floor cap
  Waveform ortho;
  ortho.samples = noise.samples;
  CHECK(si_sdr(ortho, ref) == doctest::Approx(-kSiSdrCapDb));

  Waveform zero;
  zero.samples.assign(4000, 0.0);
  CHECK_THROWS_AS(si_sdr(ref, zero), std::invalid_argument);
  Waveform shorter = random_wave(3999, 404);
  CHECK_THROWS_AS(si_sdr(shorter, ref), std::invalid_argument);
  CHECK_THROWS_AS(si_sdr(Waveform{}, Waveform{}), std::invalid_argument);
}

TEST_CASE("spectral_l1 agrees with the training-side distance") {
  const StftConfig cfg(64, 32);
  const Waveform a = random_wave(500, 405);
  const Waveform b = random_wave(500, 406);
  CHECK(spectral_l1(a, a, cfg) == doctest::Approx(0.0));
  CHECK(spectral_l1(a, b, cfg) == doctest::Approx(hard_loss(a, b, cfg)));
  CHECK(spectral_l1(a, b, cfg) > 0.0);
}

TEST_CASE("apply_enhancement with identity and zero masks") {
  const StftConfig cfg(64, 32);
  const Waveform y = random_wave(777, 407);
  const Spectrogram S = stft(y, cfg);

  Eigen::MatrixXcd ones =
      Eigen::MatrixXcd::Ones(S.num_bins(), S.num_frames());
  const Waveform round = apply_enhancement(ones, S, cfg);
  REQUIRE(round.num_samples() == y.num_samples());
  for (size_t i = 0; i < y.num_samples(); ++i)
    CHECK(round.samples[i] == doctest::Approx(y.samples[i]).epsilon(1e-9));

  Eigen::MatrixXcd zeros =
      Eigen::MatrixXcd::Zero(S.num_bins(), S.num_frames());
  const Waveform silent = apply_enhancement(zeros, S, cfg);
  REQUIRE(silent.num_samples() == y.num_samples());
  for (double x : silent.samples) CHECK(x == doctest::Approx(0.0));
}

TEST_CASE("enhance preserves length and is deterministic") {
  const StftConfig cfg(64, 32);
  const FTJNF model = tiny_model(408);
  const ExampleSource source =
      synthetic_source(409, 0.3, ArrayGeometry::default_array());
  const MixtureExample ex = source(5.0, 0);

  const Waveform out1 = enhance(model, ex, cfg, 4);
  const Waveform out2 = enhance(model, ex, cfg, 4);
  REQUIRE(out1.num_samples() == ex.y.num_samples());
  CHECK(out1.sample_rate == ex.y.sample_rate);
  CHECK(out1.samples == out2.samples);
  CHECK(all_finite(out1.samples));

  CHECK_THROWS_AS(enhance(model, ex, cfg, 5), std::invalid_argument);
  CHECK_THROWS_AS(enhance(model, ex, cfg, -1), std::invalid_argument);
}

TEST_CASE("synthetic_source is a pure function of snr and index") {
  const ExampleSource source =
      synthetic_source(410, 0.3, ArrayGeometry::default_array());
  const MixtureExample a = source(5.0, 3);
  const MixtureExample b = source(5.0, 3);
  CHECK(a.snr_db == 5.0);
  REQUIRE(a.y.num_channels() == 5);
  CHECK(a.y.channels == b.y.channels);
  CHECK(a.s.samples == b.s.samples);

  const MixtureExample c = source(5.0, 4);
  CHECK(a.y.channels[0] != c.y.channels[0]);
  const MixtureExample d = source(0.0, 3);
  CHECK(a.y.channels[0] != d.y.channels[0]);

  // reverberant path differs from the anechoic one on the same key
  const ExampleSource dry =
      synthetic_source(410, 0.3, ArrayGeometry::default_array(), false);
  const MixtureExample e = dry(5.0, 3);
  CHECK(a.y.channels[0] != e.y.channels[0]);
}

TEST_CASE("run_snr_sweep row order, pairing and recomputable statistics") {
  const StftConfig cfg(64, 32);
  const FTJNF model = tiny_model(411);
  EvalProtocol protocol;
  protocol.snr_grid_db = {0.0, 10.0};
  protocol.examples_per_snr = 3;
  protocol.reference_mic = 4;
  protocol.seed = 412;

  const ExampleSource base =
      synthetic_source(protocol.seed, 0.3, ArrayGeometry::default_array());
  int calls = 0;
  const ExampleSource counting = [&](double snr, int index) {
    ++calls;
    return base(snr, index);
  };

  const std::vector<NamedModel> models = {{"stu", &model}};
  const SnrReport report = run_snr_sweep(models, protocol, counting, cfg);

  // one generation per (snr, index) regardless of the model count
  CHECK(calls == 2 * 3);

  // snr-major; baseline first, then the model; si_sdr then spectral_l1
  REQUIRE(report.rows.size() == 2 * 2 * 2);
  const char *labels[] = {"noisy", "noisy", "stu", "stu"};
  const char *metrics[] = {"si_sdr", "spectral_l1", "si_sdr", "spectral_l1"};
  for (int g = 0; g < 2; ++g)
    for (int r = 0; r < 4; ++r) {
      const MetricResult &m = report.rows[g * 4 + r];
      CHECK(m.snr_db == protocol.snr_grid_db[g]);
      CHECK(m.model_label == labels[r]);
      CHECK(m.metric == metrics[r]);
      REQUIRE(m.values.size() == 3);
      CHECK(m.median_value == doctest::Approx(oracle_median(m.values)));
      CHECK(m.variance_value == doctest::Approx(oracle_variance(m.values)));
      CHECK(m.error_count == 0);
    }

  // baseline rows are model independent, so the same audio scores the same
  const SnrReport again = run_snr_sweep(models, protocol, base, cfg);
  CHECK(again.rows[0].values == report.rows[0].values);

  CHECK_THROWS_AS(run_snr_sweep({}, protocol, base, cfg), std::invalid_argument);
  EvalProtocol bad = protocol;
  bad.examples_per_snr = 0;
  CHECK_THROWS_AS(run_snr_sweep(models, bad, base, cfg), std::invalid_argument);
  bad = protocol;
  bad.snr_grid_db.clear();
  CHECK_THROWS_AS(run_snr_sweep(models, bad, base, cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_snr_sweep({{"null", nullptr}}, protocol, base, cfg),
                  std::invalid_argument);
}

TEST_CASE("baseline si_sdr median rises with the mixing snr") {
  const ExampleSource source =
      synthetic_source(413, 0.4, ArrayGeometry::default_array(), false);
  const std::vector<double> grid = {-5.0, 0.0, 5.0, 10.0, 15.0};
  std::vector<double> medians;
  for (double snr : grid) {
    std::vector<double> scores;
    for (int i = 0; i < 100; ++i) {
      const MixtureExample ex = source(snr, i);
      scores.push_back(si_sdr(ex.y.channel(4), ex.s));
    }
    medians.push_back(median(scores));
  }
  for (size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] > medians[i - 1]);
  // anechoic center channel: mixture quality tracks the mixing snr closely
  for (size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(medians[i] - grid[i]) < 3.0);
}

TEST_CASE("external scorer adapter parses, validates and reports failures") {
  const Waveform ref = random_wave(1600, 414);
  const Waveform est = random_wave(1600, 415);

  const PesqAdapter fixed{fake_adapter("score_fixed.sh", "echo 3.14")};
  std::string err;
  auto score = run_pesq_adapter(fixed, ref, est, &err);
  REQUIRE(score.has_value());
  CHECK(*score == doctest::Approx(3.14));
  CHECK(err.empty());

  // the adapter sees the reference first and the estimate second
  const PesqAdapter cmp{fake_adapter(
      "score_cmp.sh", "if cmp -s \"$1\" \"$2\"; then echo 4.5; else echo 1.0; fi")};
  auto self = run_pesq_adapter(cmp, ref, ref);
  REQUIRE(self.has_value());
  CHECK(*self == doctest::Approx(4.5));
  auto cross = run_pesq_adapter(cmp, ref, est);
  REQUIRE(cross.has_value());
  CHECK(*cross == doctest::Approx(1.0));

  const PesqAdapter garbage{fake_adapter("score_garbage.sh", "echo banana")};
  CHECK_FALSE(run_pesq_adapter(garbage, ref, est, &err).has_value());
  CHECK_FALSE(err.empty());

  const PesqAdapter range{fake_adapter("score_range.sh", "echo 9.9")};
  CHECK_FALSE(run_pesq_adapter(range, ref, est, &err).has_value());

  const PesqAdapter failing{fake_adapter("score_fail.sh", "exit 1")};
  CHECK_FALSE(run_pesq_adapter(failing, ref, est, &err).has_value());

  const PesqAdapter missing{(scratch_dir() / "no_such_adapter").string()};
  CHECK_FALSE(run_pesq_adapter(missing, ref, est, &err).has_value());
}

TEST_CASE("snr sweep attaches external scores and counts adapter failures") {
  const StftConfig cfg(64, 32);
  const FTJNF model = tiny_model(416);
  EvalProtocol protocol;
  protocol.snr_grid_db = {5.0};
  protocol.examples_per_snr = 2;
  protocol.seed = 417;
  const ExampleSource source =
      synthetic_source(protocol.seed, 0.3, ArrayGeometry::default_array());
  const std::vector<NamedModel> models = {{"stu", &model}};

  const PesqAdapter fixed{fake_adapter("score_fixed2.sh", "echo 2.5")};
  const SnrReport ok = run_snr_sweep(models, protocol, source, cfg, &fixed);
  REQUIRE(ok.rows.size() == 2 * 3);
  const MetricResult &pesq = ok.rows[2];
  CHECK(pesq.metric == "pesq");
  CHECK(pesq.model_label == "noisy");
  REQUIRE(pesq.values.size() == 2);
  CHECK(pesq.median_value == doctest::Approx(2.5));
  CHECK(pesq.error_count == 0);

  const PesqAdapter broken{fake_adapter("score_broken.sh", "echo nope")};
  const SnrReport bad = run_snr_sweep(models, protocol, source, cfg, &broken);
  const MetricResult &failed = bad.rows[2];
  CHECK(failed.metric == "pesq");
  CHECK(failed.values.empty());
  CHECK(failed.error_count == 2);
  CHECK(failed.median_value == 0.0);
}

TEST_CASE("run_size_sweep keeps the teacher first and tolerates absent cells") {
  const StftConfig cfg(64, 32);
  const FTJNF teacher = tiny_model(418);
  const FTJNF s1 = tiny_model(419);
  const FTJNF s2 = tiny_model(420);
  const ExampleSource source =
      synthetic_source(421, 0.3, ArrayGeometry::default_array());

  const std::vector<SizeSweepCell> cells = {
      {'I', KDMethod::kLinear, &s1},
      {'H', KDMethod::kMask, nullptr},
      {'G', KDMethod::kMulti, &s2},
  };
  const SizeReport report =
      run_size_sweep({"teacher", &teacher}, cells, 5.0, 2, 4, source, cfg);

  CHECK(report.snr_db == 5.0);
  REQUIRE(report.rows.size() == 4);
  CHECK(report.rows[0].method_label == "teacher");
  CHECK(report.rows[0].preset == 0);
  CHECK_FALSE(report.rows[0].absent);
  CHECK(report.rows[0].macs_per_frame > 0);
  REQUIRE(report.rows[0].metrics.size() == 2);

  CHECK(report.rows[1].model_label == "I-linear");
  CHECK(report.rows[1].preset == 'I');
  CHECK(report.rows[2].model_label == "H-mask");
  CHECK(report.rows[2].absent);
  CHECK(report.rows[2].metrics.empty());
  CHECK(report.rows[3].model_label == "G-multi");
  CHECK_FALSE(report.rows[3].absent);

  // the compute axis follows the published ladder even for absent cells
  CHECK(report.rows[1].macs_per_frame < report.rows[2].macs_per_frame);
  CHECK(report.rows[2].macs_per_frame < report.rows[3].macs_per_frame);

  for (const SizeRow &row : report.rows) {
    if (row.absent) continue;
    for (const MetricResult &m : row.metrics) {
      REQUIRE(m.values.size() == 2);
      CHECK(m.median_value == doctest::Approx(oracle_median(m.values)));
    }
  }

  CHECK_THROWS_AS(
      run_size_sweep({"null", nullptr}, cells, 5.0, 2, 4, source, cfg),
      std::invalid_argument);
}

TEST_CASE("report files are deterministic and machine readable") {
  const StftConfig cfg(64, 32);
  const FTJNF model = tiny_model(422);
  EvalProtocol protocol;
  protocol.snr_grid_db = {0.0, 10.0};
  protocol.examples_per_snr = 2;
  protocol.seed = 423;
  const ExampleSource source =
      synthetic_source(protocol.seed, 0.3, ArrayGeometry::default_array());
  const SnrReport snr = run_snr_sweep({{"stu", &model}}, protocol, source, cfg);

  const fs::path dir = scratch_dir();
  const std::string p1 = (dir / "snr1.jsonl").string();
  const std::string p2 = (dir / "snr2.jsonl").string();
  write_snr_report_jsonl(snr, p1);
  write_snr_report_jsonl(snr, p2);
  CHECK(slurp(p1) == slurp(p2));

  std::ifstream in(p1);
  std::string line;
  size_t lines = 0;
  while (std::getline(in, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("type") == "snr");
    CHECK(j.at("n").get<size_t>() == j.at("values").size());
    CHECK(j.contains("median"));
    CHECK(j.contains("variance"));
    ++lines;
  }
  CHECK(lines == snr.rows.size());

  const std::string text = render_snr_report_text(snr);
  CHECK(text.find("noisy") != std::string::npos);
  CHECK(text.find("stu") != std::string::npos);
  CHECK(text.find("si_sdr") != std::string::npos);

  const std::string svg1 = (dir / "snr1.svg").string();
  const std::string svg2 = (dir / "snr2.svg").string();
  write_snr_svg(snr, "si_sdr", svg1);
  write_snr_svg(snr, "si_sdr", svg2);
  const std::string svg = slurp(svg1);
  CHECK(svg == slurp(svg2));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("noisy") != std::string::npos);
  CHECK(svg.find("stu") != std::string::npos);
}

TEST_CASE("size report serialization marks absent cells and draws the teacher line") {
  const StftConfig cfg(64, 32);
  const FTJNF teacher = tiny_model(424);
  const FTJNF s1 = tiny_model(425);
  const ExampleSource source =
      synthetic_source(426, 0.3, ArrayGeometry::default_array());
  const std::vector<SizeSweepCell> cells = {
      {'I', KDMethod::kLinear, &s1},
      {'H', KDMethod::kLinear, nullptr},
  };
  const SizeReport report =
      run_size_sweep({"teacher", &teacher}, cells, 5.0, 2, 4, source, cfg);

  const fs::path dir = scratch_dir();
  const std::string p1 = (dir / "size1.jsonl").string();
  write_size_report_jsonl(report, p1);
  std::ifstream in(p1);
  std::string line;
  bool saw_absent = false;
  size_t lines = 0;
  while (std::getline(in, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("type") == "size");
    if (j.value("absent", false)) {
      saw_absent = true;
      CHECK(j.at("model") == "H-linear");
    } else {
      CHECK(j.at("macs_per_frame").get<long long>() > 0);
    }
    ++lines;
  }
  CHECK(saw_absent);
  CHECK(lines == 2 * 2 + 1);  // teacher and student rows per metric, one absent

  const std::string text = render_size_report_text(report);
  CHECK(text.find("teacher") != std::string::npos);
  CHECK(text.find("(absent)") != std::string::npos);

  const std::string svg_path = (dir / "size1.svg").string();
  write_size_svg(report, "si_sdr", svg_path);
  const std::string svg = slurp(svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("teacher") != std::string::npos);
  CHECK(svg.find("linear") != std::string::npos);
}
