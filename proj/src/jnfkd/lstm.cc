// src/jnfkd/lstm.cc

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

#include "jnfkd/lstm.h"

#include <cmath>
#include <stdexcept>

namespace jnfkd {

void snap_to_f32(Eigen::MatrixXd &m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
}

void snap_to_f32(Eigen::VectorXd &v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v.data()[i] = static_cast<double>(static_cast<float>(v.data()[i]));
}

void LstmParams::resize(int input, int hidden) {
  w_x.setZero(4 * hidden, input);
  w_h.setZero(4 * hidden, hidden);
  b_ih.setZero(4 * hidden);
  b_hh.setZero(4 * hidden);
}

void LstmParams::init(int input, int hidden, Rng &rng) {
  resize(input, hidden);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto fill = [&](double *data, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) data[i] = rng.uniform(-bound, bound);
  };
  fill(w_x.data(), w_x.size());
  fill(w_h.data(), w_h.size());
  fill(b_ih.data(), b_ih.size());
  fill(b_hh.data(), b_hh.size());
  b_ih.segment(hidden, hidden).array() += 1.0;  // forget-gate bias
  snap_to_f32(w_x);
  snap_to_f32(w_h);
  snap_to_f32(b_ih);
  snap_to_f32(b_hh);
}

void LstmGrads::resize_like(const LstmParams &p) {
  w_x.setZero(p.w_x.rows(), p.w_x.cols());
  w_h.setZero(p.w_h.rows(), p.w_h.cols());
  b_ih.setZero(p.b_ih.size());
  b_hh.setZero(p.b_hh.size());
}

void LstmGrads::set_zero() {
  w_x.setZero();
  w_h.setZero();
  b_ih.setZero();
  b_hh.setZero();
}

void LstmCache::clear() {
  x.clear();
  gi.clear();
  gf.clear();
  gg.clear();
  go.clear();
  c.clear();
  h.clear();
}

namespace {
inline Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd &a) {
  return 1.0 / (1.0 + (-a).exp());
}
}  // namespace

std::vector<Eigen::MatrixXd> lstm_forward(const LstmParams &p,
                                          const std::vector<Eigen::MatrixXd> &x,
                                          LstmCache *cache) {
  const int hidden = p.hidden_size();
  const int steps = static_cast<int>(x.size());
  if (steps == 0) throw std::invalid_argument("lstm_forward: empty sequence");
  const Eigen::Index S = x[0].rows();

  if (cache) {
    cache->clear();
    cache->x.reserve(steps);
    cache->gi.reserve(steps);
    cache->gf.reserve(steps);
    cache->gg.reserve(steps);
    cache->go.reserve(steps);
    cache->c.reserve(steps);
    cache->h.reserve(steps);
  }

  const Eigen::RowVectorXd bias = (p.b_ih + p.b_hh).transpose();
  Eigen::MatrixXd h_prev = Eigen::MatrixXd::Zero(S, hidden);
  Eigen::MatrixXd c_prev = Eigen::MatrixXd::Zero(S, hidden);

  std::vector<Eigen::MatrixXd> out;
  out.reserve(steps);
  for (int t = 0; t < steps; ++t) {
    if (x[t].rows() != S || x[t].cols() != p.input_size())
      throw std::invalid_argument("lstm_forward: inconsistent step shape");
    Eigen::MatrixXd pre = x[t] * p.w_x.transpose() + h_prev * p.w_h.transpose();
    pre.rowwise() += bias;

    Eigen::MatrixXd gi = sigmoid(pre.leftCols(hidden).array());
    Eigen::MatrixXd gf = sigmoid(pre.middleCols(hidden, hidden).array());
    Eigen::MatrixXd gg = pre.middleCols(2 * hidden, hidden).array().tanh();
    Eigen::MatrixXd go = sigmoid(pre.rightCols(hidden).array());

    Eigen::MatrixXd c = gf.cwiseProduct(c_prev) + gi.cwiseProduct(gg);
    Eigen::MatrixXd h = go.cwiseProduct(c.array().tanh().matrix());

    if (cache) {
      cache->x.push_back(x[t]);
      cache->gi.push_back(gi);
      cache->gf.push_back(gf);
      cache->gg.push_back(gg);
      cache->go.push_back(go);
      cache->c.push_back(c);
      cache->h.push_back(h);
    }
    out.push_back(h);
    h_prev = std::move(h);
    c_prev = std::move(c);
  }
  return out;
}

std::vector<Eigen::MatrixXd> lstm_backward(const LstmParams &p,
                                           const LstmCache &cache,
                                           const std::vector<Eigen::MatrixXd> &d_h,
                                           LstmGrads *grads, bool want_dx) {
  const int hidden = p.hidden_size();
  const int steps = static_cast<int>(cache.h.size());
  if (static_cast<int>(d_h.size()) != steps)
    throw std::invalid_argument("lstm_backward: gradient/step count mismatch");
  const Eigen::Index S = cache.h[0].rows();

  std::vector<Eigen::MatrixXd> d_x;
  if (want_dx) d_x.resize(steps);

  Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(S, hidden);
  Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(S, hidden);
  Eigen::MatrixXd d_pre(S, 4 * hidden);

  for (int t = steps - 1; t >= 0; --t) {
    Eigen::MatrixXd dh = dh_next;
    if (d_h[t].size() > 0) dh += d_h[t];

    const Eigen::ArrayXXd tanh_c = cache.c[t].array().tanh();
    const Eigen::ArrayXXd go = cache.go[t].array();
    const Eigen::ArrayXXd gi = cache.gi[t].array();
    const Eigen::ArrayXXd gf = cache.gf[t].array();
    const Eigen::ArrayXXd gg = cache.gg[t].array();

    Eigen::ArrayXXd dc = dh.array() * go * (1.0 - tanh_c.square()) + dc_next.array();
    Eigen::ArrayXXd c_prev = Eigen::ArrayXXd::Zero(S, hidden);
    if (t > 0) c_prev = cache.c[t - 1].array();

    d_pre.leftCols(hidden) = (dc * gg * gi * (1.0 - gi)).matrix();
    d_pre.middleCols(hidden, hidden) = (dc * c_prev * gf * (1.0 - gf)).matrix();
    d_pre.middleCols(2 * hidden, hidden) = (dc * gi * (1.0 - gg.square())).matrix();
    d_pre.rightCols(hidden) = (dh.array() * tanh_c * go * (1.0 - go)).matrix();

    if (grads) {
      grads->w_x.noalias() += d_pre.transpose() * cache.x[t];
      if (t > 0) grads->w_h.noalias() += d_pre.transpose() * cache.h[t - 1];
      const Eigen::VectorXd db = d_pre.colwise().sum().transpose();
      grads->b_ih += db;
      grads->b_hh += db;
    }
    if (want_dx) d_x[t].noalias() = d_pre * p.w_x;

    dh_next.noalias() = d_pre * p.w_h;
    dc_next = (dc * gf).matrix();
  }
  return d_x;
}

}  // namespace jnfkd
