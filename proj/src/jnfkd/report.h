// src/jnfkd/report.h

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

#ifndef JNFKD_REPORT_H_
#define JNFKD_REPORT_H_

#include <string>

#include "jnfkd/evalproto.h"

namespace jnfkd {

// Report serialization. All output is a pure function of the report structs:
// fixed row order, no timestamps, shortest-round-trip number formatting, so
// repeated runs from the same seed produce byte-identical files.

void write_snr_report_jsonl(const SnrReport &report, const std::string &path);
void write_size_report_jsonl(const SizeReport &report, const std::string &path);

// Inverse of the writers; rendering can run from the stored artifact alone.
SnrReport read_snr_report_jsonl(const std::string &path);
SizeReport read_size_report_jsonl(const std::string &path);

std::string render_snr_report_text(const SnrReport &report);
std::string render_size_report_text(const SizeReport &report);

/// Median with +-stddev whiskers per model over the SNR grid.
void write_snr_svg(const SnrReport &report, const std::string &metric,
                   const std::string &path);

/// Median versus MACs/frame on a log x axis; the teacher row becomes a
/// horizontal reference line, student cells connect per KD method.
void write_size_svg(const SizeReport &report, const std::string &metric,
                    const std::string &path);

}  // namespace jnfkd

#endif  // JNFKD_REPORT_H_
