// src/jnfkd/adam.h

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

#ifndef JNFKD_ADAM_H_
#define JNFKD_ADAM_H_

#include <vector>

#include "jnfkd/ftjnf.h"

namespace jnfkd {

// Adaptive-moment first-order optimizer over the model's parameter blobs.
// Moments are kept in double; updated parameters are snapped back to the f32
// grid so that saved containers round-trip bit-exactly.
class Adam {
 public:
  struct Options {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  /// Moment buffers are shaped after `shape`; a reverse frequency direction
  /// is included exactly when the shape carries one.
  explicit Adam(const FTJNFParams &shape) : Adam(shape, Options{}) {}
  Adam(const FTJNFParams &shape, Options opt);

  /// One update with bias-corrected moments. params must match the shape the
  /// optimizer was built with.
  void step(FTJNFParams &params, const FTJNFGrads &grads, double lr);

  /// Zeroes both moments and the step counter; the next step behaves like the
  /// first step of a fresh optimizer.
  void reset_moments();

  long long step_count() const { return t_; }

 private:
  Options opt_;
  long long t_ = 0;
  std::vector<Eigen::ArrayXd> m_, v_;
};

}  // namespace jnfkd

#endif  // JNFKD_ADAM_H_
