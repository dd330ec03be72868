// src/jnfkd/adam.cc

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

#include "jnfkd/adam.h"

#include <cmath>
#include <stdexcept>

namespace jnfkd {

namespace {

// Flat views over the parameter and gradient blobs in container order. The
// reverse frequency direction participates only when allocated.
struct Slot {
  double *p;
  const double *g;
  Eigen::Index n;
};

template <typename Params, typename Grads>
std::vector<Slot> collect_slots(Params &p, const Grads &g) {
  std::vector<Slot> slots;
  auto add = [&](auto &pm, const auto &gm) {
    if (pm.size() != gm.size())
      throw std::invalid_argument("optimizer: parameter/gradient shape mismatch");
    if (pm.size() > 0) slots.push_back({pm.data(), gm.data(), pm.size()});
  };
  auto add_lstm = [&](auto &pl, const auto &gl) {
    add(pl.w_x, gl.w_x);
    add(pl.w_h, gl.w_h);
    add(pl.b_ih, gl.b_ih);
    add(pl.b_hh, gl.b_hh);
  };
  add_lstm(p.f, g.f);
  if (p.f_rev.w_x.size() > 0) add_lstm(p.f_rev, g.f_rev);
  add_lstm(p.t, g.t);
  add(p.w_lin, g.w_lin);
  add(p.b_lin, g.b_lin);
  return slots;
}

}  // namespace

Adam::Adam(const FTJNFParams &shape, Options opt) : opt_(opt) {
  auto add = [&](const auto &blob) {
    if (blob.size() > 0) {
      m_.push_back(Eigen::ArrayXd::Zero(blob.size()));
      v_.push_back(Eigen::ArrayXd::Zero(blob.size()));
    }
  };
  auto add_lstm = [&](const LstmParams &l) {
    add(l.w_x);
    add(l.w_h);
    add(l.b_ih);
    add(l.b_hh);
  };
  add_lstm(shape.f);
  add_lstm(shape.f_rev);
  add_lstm(shape.t);
  add(shape.w_lin);
  add(shape.b_lin);
}

void Adam::step(FTJNFParams &params, const FTJNFGrads &grads, double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr))
    throw std::invalid_argument("optimizer: learning rate must be positive");
  const std::vector<Slot> slots = collect_slots(params, grads);
  if (slots.size() != m_.size())
    throw std::invalid_argument("optimizer: model shape changed under the optimizer");

  ++t_;
  const double c1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < slots.size(); ++i) {
    const Slot &s = slots[i];
    if (m_[i].size() != s.n)
      throw std::invalid_argument("optimizer: model shape changed under the optimizer");
    Eigen::Map<const Eigen::ArrayXd> g(s.g, s.n);
    m_[i] = opt_.beta1 * m_[i] + (1.0 - opt_.beta1) * g;
    v_[i] = opt_.beta2 * v_[i] + (1.0 - opt_.beta2) * g.square();
    Eigen::Map<Eigen::ArrayXd> p(s.p, s.n);
    p -= lr * (m_[i] / c1) / ((v_[i] / c2).sqrt() + opt_.eps);
    for (Eigen::Index j = 0; j < s.n; ++j)
      s.p[j] = static_cast<double>(static_cast<float>(s.p[j]));
  }
}

void Adam::reset_moments() {
  t_ = 0;
  for (auto &m : m_) m.setZero();
  for (auto &v : v_) v.setZero();
}

}  // namespace jnfkd
