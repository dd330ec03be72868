// src/jnfkd/geometry.cc

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

#include "jnfkd/geometry.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jnfkd {

double point_distance(const Point3 &a, const Point3 &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ArrayGeometry ArrayGeometry::default_array() {
  ArrayGeometry g;
  const double r = 0.05;
  g.mic_positions = {
      {r, 0.0, 0.0},   // front
      {0.0, r, 0.0},
      {-r, 0.0, 0.0},
      {0.0, -r, 0.0},
      {0.0, 0.0, 0.0},  // center
  };
  g.front_index = 0;
  g.center_index = 4;
  g.validate();
  return g;
}

void ArrayGeometry::validate() const {
  if (num_mics() != 5)
    throw std::invalid_argument("array geometry requires exactly 5 microphones");
  if (front_index < 0 || front_index >= num_mics())
    throw std::invalid_argument("front_index out of range");
  if (center_index < 0 || center_index >= num_mics())
    throw std::invalid_argument("center_index out of range");
  for (int i = 0; i < num_mics(); ++i)
    for (int j = i + 1; j < num_mics(); ++j)
      if (point_distance(mic_positions[i], mic_positions[j]) > 0.2)
        throw std::invalid_argument("microphone spacing exceeds 0.2 m");
}

Point3 SourcePosition::to_cartesian() const {
  const double az = azimuth_deg * std::numbers::pi / 180.0;
  const double el = elevation_deg * std::numbers::pi / 180.0;
  return {distance_m * std::cos(el) * std::cos(az),
          distance_m * std::cos(el) * std::sin(az),
          distance_m * std::sin(el)};
}

SourcePosition sample_talker_position(Rng &rng) {
  // 13 azimuths x 5 elevations; a single draw indexes the flattened grid
  const uint64_t idx = rng.uniform_int(13 * 5);
  SourcePosition p;
  p.azimuth_deg = -30.0 + 5.0 * static_cast<double>(idx % 13);
  p.elevation_deg = -10.0 + 5.0 * static_cast<double>(idx / 13);
  p.distance_m = 5.0;
  return p;
}

SourcePosition sample_noise_position(Rng &rng, double distance_m) {
  if (distance_m <= 0.0)
    throw std::invalid_argument("noise distance must be positive");
  SourcePosition p;
  p.azimuth_deg = 45.0 * static_cast<double>(rng.uniform_int(8));
  p.elevation_deg = 0.0;
  p.distance_m = distance_m;
  return p;
}

}  // namespace jnfkd
