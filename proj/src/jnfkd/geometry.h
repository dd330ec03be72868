// src/jnfkd/geometry.h

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

#ifndef JNFKD_GEOMETRY_H_
#define JNFKD_GEOMETRY_H_

#include <array>
#include <vector>

#include "jnfkd/rng.h"

namespace jnfkd {

using Point3 = std::array<double, 3>;

double point_distance(const Point3 &a, const Point3 &b);

// Compact five-microphone array. The default layout puts four microphones on
// a 5 cm-radius circle in the horizontal plane and one at the center; the +x
// circle microphone is the front microphone (SNR reference) and the center
// one is the mask-application reference.
struct ArrayGeometry {
  std::vector<Point3> mic_positions;
  int front_index = -1;
  int center_index = -1;

  static ArrayGeometry default_array();
  void validate() const;
  int num_mics() const { return static_cast<int>(mic_positions.size()); }
};

/// Point source location. Azimuth 0 is the +x axis (towards the front
/// microphone), measured counterclockwise in the horizontal plane.
struct SourcePosition {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double distance_m = 1.0;

  Point3 to_cartesian() const;
};

/// Uniform draw from the 13 x 5 talker grid: azimuth -30..+30 in 5 degree
/// steps, elevation -10..+10 in 5 degree steps, 5 m distance.
SourcePosition sample_talker_position(Rng &rng);

/// Uniform draw from the 8-point noise grid: azimuth 0..315 in 45 degree
/// steps at elevation 0. The grid does not pin a distance; the caller
/// supplies one.
SourcePosition sample_noise_position(Rng &rng, double distance_m);

}  // namespace jnfkd

#endif  // JNFKD_GEOMETRY_H_
