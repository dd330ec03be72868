// src/jnfkd/manifest.cc

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

#include "jnfkd/manifest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "jnfkd/wav.h"

namespace jnfkd {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(SourceRole role) {
  switch (role) {
    case SourceRole::kSpeech: return "speech";
    case SourceRole::kNoise: return "noise";
    case SourceRole::kRir: return "rir";
  }
  throw std::logic_error("unknown role");
}

std::string to_string(DataSplit split) {
  switch (split) {
    case DataSplit::kTrain: return "train";
    case DataSplit::kVal: return "val";
    case DataSplit::kTest: return "test";
  }
  throw std::logic_error("unknown split");
}

SourceRole parse_source_role(const std::string &s) {
  if (s == "speech") return SourceRole::kSpeech;
  if (s == "noise") return SourceRole::kNoise;
  if (s == "rir") return SourceRole::kRir;
  throw std::runtime_error("manifest: unknown role '" + s + "'");
}

DataSplit parse_data_split(const std::string &s) {
  if (s == "train") return DataSplit::kTrain;
  if (s == "val") return DataSplit::kVal;
  if (s == "test") return DataSplit::kTest;
  throw std::runtime_error("manifest: unknown split '" + s + "'");
}

std::vector<ManifestEntry> read_manifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw std::runtime_error("manifest " + path + " line " +
                               std::to_string(lineno) + ": " + e.what());
    }
    ManifestEntry e;
    e.path = j.at("path").get<std::string>();
    e.role = parse_source_role(j.at("role").get<std::string>());
    e.split = parse_data_split(j.at("split").get<std::string>());
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::string &path, const std::vector<ManifestEntry> &entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  for (const auto &e : entries) {
    json j;
    j["path"] = e.path;
    j["role"] = to_string(e.role);
    j["split"] = to_string(e.split);
    out << j.dump() << "\n";
  }
}

void write_example(const std::string &dir, const MixtureExample &ex) {
  fs::create_directories(dir);
  write_wav(dir + "/y.wav", ex.y, WavFormat::kFloat32);
  write_wav(dir + "/x.wav", ex.x, WavFormat::kFloat32);
  write_wav(dir + "/s.wav", ex.s, WavFormat::kFloat32);

  auto pos_json = [](const SourcePosition &p) {
    json j;
    j["azimuth_deg"] = p.azimuth_deg;
    j["elevation_deg"] = p.elevation_deg;
    j["distance_m"] = p.distance_m;
    return j;
  };
  json meta;
  meta["snr_db"] = ex.snr_db;
  meta["seed"] = ex.seed;
  meta["talker"] = pos_json(ex.talker_pos);
  meta["noise"] = pos_json(ex.noise_pos);
  std::ofstream out(dir + "/meta.json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + dir + "/meta.json");
  out << meta.dump(2) << "\n";
}

MixtureExample read_example(const std::string &dir) {
  MixtureExample ex;
  ex.y = read_wav_checked(dir + "/y.wav", kSampleRate);
  ex.x = read_wav_checked(dir + "/x.wav", kSampleRate);
  ex.s = read_wav_mono(dir + "/s.wav");

  std::ifstream in(dir + "/meta.json");
  if (!in) throw std::runtime_error("cannot open " + dir + "/meta.json");
  json meta = json::parse(in);
  auto pos_from = [](const json &j) {
    SourcePosition p;
    p.azimuth_deg = j.at("azimuth_deg").get<double>();
    p.elevation_deg = j.at("elevation_deg").get<double>();
    p.distance_m = j.at("distance_m").get<double>();
    return p;
  };
  ex.snr_db = meta.at("snr_db").get<double>();
  ex.seed = meta.at("seed").get<uint64_t>();
  ex.talker_pos = pos_from(meta.at("talker"));
  ex.noise_pos = pos_from(meta.at("noise"));
  return ex;
}

std::vector<std::string> list_example_dirs(const std::string &root) {
  std::vector<std::string> dirs;
  if (!fs::is_directory(root))
    throw std::runtime_error("not a directory: " + root);
  for (const auto &entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json"))
      dirs.push_back(entry.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace jnfkd
