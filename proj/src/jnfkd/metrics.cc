// src/jnfkd/metrics.cc

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

#include "jnfkd/metrics.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "jnfkd/losses.h"
#include "jnfkd/wav.h"

namespace jnfkd {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: no values");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double population_variance(const std::vector<double> &values) {
  if (values.empty()) throw std::invalid_argument("variance: no values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size());
}

double si_sdr(const Waveform &estimate, const Waveform &reference) {
  if (estimate.samples.size() != reference.samples.size())
    throw std::invalid_argument("si_sdr: length mismatch");
  if (estimate.samples.empty()) throw std::invalid_argument("si_sdr: empty signals");

  double dot = 0.0, ref_energy = 0.0;
  for (size_t i = 0; i < reference.samples.size(); ++i) {
    dot += estimate.samples[i] * reference.samples[i];
    ref_energy += reference.samples[i] * reference.samples[i];
  }
  if (ref_energy <= 0.0)
    throw std::invalid_argument("si_sdr: degenerate input, reference carries no energy");

  const double scale = dot / ref_energy;
  double target_energy = 0.0, error_energy = 0.0;
  for (size_t i = 0; i < reference.samples.size(); ++i) {
    const double t = scale * reference.samples[i];
    const double e = estimate.samples[i] - t;
    target_energy += t * t;
    error_energy += e * e;
  }
  if (error_energy <= 0.0 || target_energy <= 0.0) {
    // exact match (up to scale) or a fully orthogonal estimate
    return error_energy <= 0.0 ? kSiSdrCapDb : -kSiSdrCapDb;
  }
  const double db = 10.0 * std::log10(target_energy / error_energy);
  return std::clamp(db, -kSiSdrCapDb, kSiSdrCapDb);
}

double spectral_l1(const Waveform &estimate, const Waveform &reference,
                   const StftConfig &cfg) {
  return hard_loss(estimate, reference, cfg);
}

namespace {
std::atomic<uint64_t> g_pesq_counter{0};
}  // namespace

std::optional<double> run_pesq_adapter(const PesqAdapter &adapter,
                                       const Waveform &reference,
                                       const Waveform &estimate,
                                       std::string *error) {
  auto fail = [&](const std::string &msg) -> std::optional<double> {
    if (error) *error = msg;
    return std::nullopt;
  };
  if (adapter.command.empty()) return fail("adapter command is empty");

  namespace fs = std::filesystem;
  const uint64_t id = g_pesq_counter.fetch_add(1);
  const std::string stem = (fs::temp_directory_path() /
                            ("jnfkd_pesq_" + std::to_string(::getpid()) + "_" +
                             std::to_string(id)))
                               .string();
  const std::string ref_path = stem + "_ref.wav";
  const std::string est_path = stem + "_est.wav";

  std::optional<double> score;
  std::string message;
  try {
    write_wav(ref_path, reference);
    write_wav(est_path, estimate);
    const std::string cmd =
        adapter.command + " \"" + ref_path + "\" \"" + est_path + "\" 2>/dev/null";
    FILE *pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
      message = "cannot launch adapter";
    } else {
      char buf[256] = {0};
      const bool got = std::fgets(buf, sizeof(buf), pipe) != nullptr;
      const int status = ::pclose(pipe);
      if (status != 0) {
        message = "adapter exited with status " + std::to_string(status);
      } else if (!got) {
        message = "adapter printed no output";
      } else {
        char *end = nullptr;
        const double v = std::strtod(buf, &end);
        while (end && (*end == ' ' || *end == '\n' || *end == '\r')) ++end;
        if (end == buf || (end && *end != '\0')) {
          message = std::string("cannot parse adapter output: ") + buf;
        } else if (!std::isfinite(v) || v < -0.5 || v > 4.5) {
          message = "adapter score out of range: " + std::to_string(v);
        } else {
          score = v;
        }
      }
    }
  } catch (const std::exception &e) {
    message = e.what();
  }
  std::error_code ec;
  fs::remove(ref_path, ec);
  fs::remove(est_path, ec);
  if (!score) return fail(message);
  return score;
}

}  // namespace jnfkd
