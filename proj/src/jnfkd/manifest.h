// src/jnfkd/manifest.h

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

#ifndef JNFKD_MANIFEST_H_
#define JNFKD_MANIFEST_H_

#include <string>
#include <vector>

#include "jnfkd/scene.h"

namespace jnfkd {

// Dataset manifests are line-delimited JSON records
//   {"path": "...", "role": "speech|noise|rir", "split": "train|val|test"}
// pointing at WAV files (role rir uses one multichannel WAV per response).

enum class SourceRole { kSpeech, kNoise, kRir };
enum class DataSplit { kTrain, kVal, kTest };

struct ManifestEntry {
  std::string path;
  SourceRole role;
  DataSplit split;
};

std::vector<ManifestEntry> read_manifest(const std::string &path);
void write_manifest(const std::string &path, const std::vector<ManifestEntry> &entries);

std::string to_string(SourceRole role);
std::string to_string(DataSplit split);
SourceRole parse_source_role(const std::string &s);
DataSplit parse_data_split(const std::string &s);

// A rendered example is a directory holding y.wav, x.wav, s.wav (float32, so
// the round trip is lossless) and meta.json with the scalar fields. The noise
// component is recovered as y - x.

void write_example(const std::string &dir, const MixtureExample &ex);
MixtureExample read_example(const std::string &dir);

/// Sorted example directories (those containing meta.json) directly under root.
std::vector<std::string> list_example_dirs(const std::string &root);

}  // namespace jnfkd

#endif  // JNFKD_MANIFEST_H_
