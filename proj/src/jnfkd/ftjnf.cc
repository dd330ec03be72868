// src/jnfkd/ftjnf.cc

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

#include "jnfkd/ftjnf.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>

#include <json.hpp>

namespace jnfkd {

void FTJNFGrads::resize_like(const FTJNFParams &p, bool bidirectional) {
  f.resize_like(p.f);
  if (bidirectional) f_rev.resize_like(p.f_rev);
  t.resize_like(p.t);
  w_lin.setZero(p.w_lin.rows(), p.w_lin.cols());
  b_lin.setZero(p.b_lin.size());
}

void FTJNFGrads::set_zero() {
  f.set_zero();
  if (f_rev.w_x.size() > 0) f_rev.set_zero();
  t.set_zero();
  w_lin.setZero();
  b_lin.setZero();
}

FTJNF::FTJNF(const ModelConfig &cfg) : cfg_(cfg) {
  cfg_.validate();
  const int in = cfg_.input_width();
  if (cfg_.f_bidirectional) {
    params_.f.resize(in, cfg_.f_hidden / 2);
    params_.f_rev.resize(in, cfg_.f_hidden / 2);
  } else {
    params_.f.resize(in, cfg_.f_hidden);
  }
  params_.t.resize(cfg_.f_hidden, cfg_.t_hidden);
  params_.w_lin.setZero(2, cfg_.t_hidden);
  params_.b_lin.setZero(2);
}

void FTJNF::init(Rng &rng) {
  const int in = cfg_.input_width();
  if (cfg_.f_bidirectional) {
    params_.f.init(in, cfg_.f_hidden / 2, rng);
    params_.f_rev.init(in, cfg_.f_hidden / 2, rng);
  } else {
    params_.f.init(in, cfg_.f_hidden, rng);
  }
  params_.t.init(cfg_.f_hidden, cfg_.t_hidden, rng);
  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg_.t_hidden));
  for (Eigen::Index i = 0; i < params_.w_lin.size(); ++i)
    params_.w_lin.data()[i] = rng.uniform(-bound, bound);
  for (Eigen::Index i = 0; i < params_.b_lin.size(); ++i)
    params_.b_lin.data()[i] = rng.uniform(-bound, bound);
  snap_to_f32(params_.w_lin);
  snap_to_f32(params_.b_lin);
}

long long FTJNF::num_params() const {
  long long n = params_.f.num_params() + params_.t.num_params() +
                params_.w_lin.size() + params_.b_lin.size();
  if (cfg_.f_bidirectional) n += params_.f_rev.num_params();
  return n;
}

IntermediateTaps FTJNF::forward(const Eigen::MatrixXd &features, int K, int L,
                                ForwardCache *cache) const {
  if (K < 1 || L < 1) throw std::invalid_argument("forward: empty grid");
  if (features.rows() != static_cast<Eigen::Index>(K) * L ||
      features.cols() != cfg_.input_width())
    throw std::invalid_argument("forward: feature shape mismatch");
  if (!features.allFinite())
    throw std::invalid_argument("forward: non-finite features");

  if (cache) {
    cache->K = K;
    cache->L = L;
  }

  // frequency axis: L independent sequences of length K
  std::vector<Eigen::MatrixXd> f_in(K);
  for (int k = 0; k < K; ++k) {
    f_in[k].resize(L, features.cols());
    for (int l = 0; l < L; ++l)
      f_in[k].row(l) = features.row(static_cast<Eigen::Index>(l) * K + k);
  }

  IntermediateTaps taps;
  taps.z_f.resize(static_cast<Eigen::Index>(K) * L, cfg_.f_hidden);
  if (cfg_.f_bidirectional) {
    const int half = cfg_.f_hidden / 2;
    auto h_fwd = lstm_forward(params_.f, f_in, cache ? &cache->f_cache : nullptr);
    std::vector<Eigen::MatrixXd> f_in_rev(K);
    for (int k = 0; k < K; ++k) f_in_rev[k] = f_in[K - 1 - k];
    auto h_rev =
        lstm_forward(params_.f_rev, f_in_rev, cache ? &cache->f_rev_cache : nullptr);
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) {
        taps.z_f.row(static_cast<Eigen::Index>(l) * K + k).head(half) =
            h_fwd[k].row(l);
        taps.z_f.row(static_cast<Eigen::Index>(l) * K + k).tail(half) =
            h_rev[K - 1 - k].row(l);
      }
  } else {
    auto h_fwd = lstm_forward(params_.f, f_in, cache ? &cache->f_cache : nullptr);
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l)
        taps.z_f.row(static_cast<Eigen::Index>(l) * K + k) = h_fwd[k].row(l);
  }

  // time axis: K independent causal sequences of length L
  std::vector<Eigen::MatrixXd> t_in(L);
  for (int l = 0; l < L; ++l)
    t_in[l] = taps.z_f.middleRows(static_cast<Eigen::Index>(l) * K, K);
  auto h_t = lstm_forward(params_.t, t_in, cache ? &cache->t_cache : nullptr);

  taps.z_t.resize(static_cast<Eigen::Index>(K) * L, cfg_.t_hidden);
  for (int l = 0; l < L; ++l)
    taps.z_t.middleRows(static_cast<Eigen::Index>(l) * K, K) = h_t[l];

  taps.z_lin = taps.z_t * params_.w_lin.transpose();
  taps.z_lin.rowwise() += params_.b_lin.transpose();
  if (!taps.z_lin.allFinite())
    throw std::runtime_error("forward: non-finite activation at the linear head");

  taps.mask.resize(K, L);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      const Eigen::Index r = static_cast<Eigen::Index>(l) * K + k;
      taps.mask(k, l) = std::complex<double>(std::tanh(taps.z_lin(r, 0)),
                                             std::tanh(taps.z_lin(r, 1)));
    }
  return taps;
}

void FTJNF::backward(const IntermediateTaps &taps, const TapGrads &grad,
                     const ForwardCache &cache, FTJNFGrads *grads) const {
  const int K = cache.K, L = cache.L;
  if (K < 1 || L < 1) throw std::invalid_argument("backward: cache not populated");
  const Eigen::Index rows = static_cast<Eigen::Index>(K) * L;

  // gradient into the pre-tanh linear output
  Eigen::MatrixXd d_zlin = Eigen::MatrixXd::Zero(rows, 2);
  if (grad.d_zlin.size() > 0) d_zlin = grad.d_zlin;
  if (grad.d_mask.size() > 0) {
    if (grad.d_mask.rows() != K || grad.d_mask.cols() != L)
      throw std::invalid_argument("backward: d_mask shape mismatch");
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        const Eigen::Index r = static_cast<Eigen::Index>(l) * K + k;
        const std::complex<double> w = taps.mask(k, l);
        d_zlin(r, 0) += grad.d_mask(k, l).real() * (1.0 - w.real() * w.real());
        d_zlin(r, 1) += grad.d_mask(k, l).imag() * (1.0 - w.imag() * w.imag());
      }
  }

  grads->w_lin.noalias() += d_zlin.transpose() * taps.z_t;
  grads->b_lin += d_zlin.colwise().sum().transpose();

  Eigen::MatrixXd d_zt = d_zlin * params_.w_lin;
  if (grad.d_zt.size() > 0) d_zt += grad.d_zt;

  // time axis backward
  std::vector<Eigen::MatrixXd> d_ht(L);
  for (int l = 0; l < L; ++l)
    d_ht[l] = d_zt.middleRows(static_cast<Eigen::Index>(l) * K, K);
  auto d_tin = lstm_backward(params_.t, cache.t_cache, d_ht, &grads->t, true);

  Eigen::MatrixXd d_zf(rows, cfg_.f_hidden);
  for (int l = 0; l < L; ++l)
    d_zf.middleRows(static_cast<Eigen::Index>(l) * K, K) = d_tin[l];
  if (grad.d_zf.size() > 0) d_zf += grad.d_zf;

  // frequency axis backward
  if (cfg_.f_bidirectional) {
    const int half = cfg_.f_hidden / 2;
    std::vector<Eigen::MatrixXd> d_hf(K), d_hr(K);
    for (int k = 0; k < K; ++k) {
      d_hf[k].resize(L, half);
      d_hr[k].resize(L, half);
    }
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) {
        const Eigen::Index r = static_cast<Eigen::Index>(l) * K + k;
        d_hf[k].row(l) = d_zf.row(r).head(half);
        d_hr[K - 1 - k].row(l) = d_zf.row(r).tail(half);
      }
    lstm_backward(params_.f, cache.f_cache, d_hf, &grads->f, false);
    lstm_backward(params_.f_rev, cache.f_rev_cache, d_hr, &grads->f_rev, false);
  } else {
    std::vector<Eigen::MatrixXd> d_hf(K);
    for (int k = 0; k < K; ++k) {
      d_hf[k].resize(L, cfg_.f_hidden);
      for (int l = 0; l < L; ++l)
        d_hf[k].row(l) = d_zf.row(static_cast<Eigen::Index>(l) * K + k);
    }
    lstm_backward(params_.f, cache.f_cache, d_hf, &grads->f, false);
  }
}

Eigen::MatrixXd featurize(const std::vector<Spectrogram> &mics) {
  if (mics.empty()) throw std::invalid_argument("featurize: no channels");
  const int K = mics[0].num_bins();
  const int L = mics[0].num_frames();
  for (const auto &m : mics)
    if (m.num_bins() != K || m.num_frames() != L)
      throw std::invalid_argument("featurize: channel shape mismatch");

  Eigen::MatrixXd out(static_cast<Eigen::Index>(K) * L, 2 * mics.size());
  for (size_t m = 0; m < mics.size(); ++m)
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        const Eigen::Index r = static_cast<Eigen::Index>(l) * K + k;
        out(r, 2 * m) = mics[m].coefficients(k, l).real();
        out(r, 2 * m + 1) = mics[m].coefficients(k, l).imag();
      }
  return out;
}

std::vector<Spectrogram> defeaturize(const Eigen::MatrixXd &features, int K, int L) {
  if (features.rows() != static_cast<Eigen::Index>(K) * L || features.cols() % 2 != 0)
    throw std::invalid_argument("defeaturize: shape mismatch");
  std::vector<Spectrogram> mics(features.cols() / 2);
  for (size_t m = 0; m < mics.size(); ++m) {
    mics[m].coefficients.resize(K, L);
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        const Eigen::Index r = static_cast<Eigen::Index>(l) * K + k;
        mics[m].coefficients(k, l) =
            std::complex<double>(features(r, 2 * m), features(r, 2 * m + 1));
      }
  }
  return mics;
}

Spectrogram apply_mask(const Eigen::MatrixXcd &mask, const Spectrogram &y_ref) {
  if (mask.rows() != y_ref.coefficients.rows() ||
      mask.cols() != y_ref.coefficients.cols())
    throw std::invalid_argument("apply_mask: shape mismatch");
  Spectrogram out;
  out.coefficients = mask.cwiseProduct(y_ref.coefficients);
  out.num_samples = y_ref.num_samples;
  return out;
}

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'J', 'N', 'F', 'K', 'D', 'M', 'D', '1'};

void write_u32(std::ofstream &out, uint32_t v) {
  out.write(reinterpret_cast<const char *>(&v), 4);
}
void write_u64(std::ofstream &out, uint64_t v) {
  out.write(reinterpret_cast<const char *>(&v), 8);
}

void write_blob(std::ofstream &out, const std::string &name, const double *data,
                size_t count) {
  write_u32(out, static_cast<uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u64(out, count);
  std::vector<float> f(count);
  for (size_t i = 0; i < count; ++i) f[i] = static_cast<float>(data[i]);
  out.write(reinterpret_cast<const char *>(f.data()),
            static_cast<std::streamsize>(count * 4));
}

uint32_t read_u32(std::ifstream &in) {
  uint32_t v;
  in.read(reinterpret_cast<char *>(&v), 4);
  if (!in) throw std::runtime_error("model container: truncated file");
  return v;
}
uint64_t read_u64(std::ifstream &in) {
  uint64_t v;
  in.read(reinterpret_cast<char *>(&v), 8);
  if (!in) throw std::runtime_error("model container: truncated file");
  return v;
}

void read_blob(std::ifstream &in, const std::string &expected_name, double *data,
               size_t count) {
  const uint32_t name_len = read_u32(in);
  std::string name(name_len, '\0');
  in.read(name.data(), name_len);
  if (!in || name != expected_name)
    throw std::runtime_error("model container: expected blob '" + expected_name +
                             "', found '" + name + "'");
  const uint64_t stored = read_u64(in);
  if (stored != count)
    throw std::runtime_error("model container: blob '" + name + "' has " +
                             std::to_string(stored) + " values, expected " +
                             std::to_string(count));
  std::vector<float> f(count);
  in.read(reinterpret_cast<char *>(f.data()),
          static_cast<std::streamsize>(count * 4));
  if (!in) throw std::runtime_error("model container: truncated blob '" + name + "'");
  for (size_t i = 0; i < count; ++i) data[i] = static_cast<double>(f[i]);
}

void for_each_blob(const FTJNFParams &p, bool bidirectional,
                   const std::function<void(const std::string &, const double *,
                                            double *, size_t)> &fn) {
  auto visit = [&](const std::string &name, const Eigen::MatrixXd &m) {
    fn(name, m.data(), const_cast<double *>(m.data()), m.size());
  };
  auto visit_v = [&](const std::string &name, const Eigen::VectorXd &v) {
    fn(name, v.data(), const_cast<double *>(v.data()), v.size());
  };
  visit("f.w_x", p.f.w_x);
  visit("f.w_h", p.f.w_h);
  visit_v("f.b_ih", p.f.b_ih);
  visit_v("f.b_hh", p.f.b_hh);
  if (bidirectional) {
    visit("f_rev.w_x", p.f_rev.w_x);
    visit("f_rev.w_h", p.f_rev.w_h);
    visit_v("f_rev.b_ih", p.f_rev.b_ih);
    visit_v("f_rev.b_hh", p.f_rev.b_hh);
  }
  visit("t.w_x", p.t.w_x);
  visit("t.w_h", p.t.w_h);
  visit_v("t.b_ih", p.t.b_ih);
  visit_v("t.b_hh", p.t.b_hh);
  visit("lin.w", p.w_lin);
  visit_v("lin.b", p.b_lin);
}

}  // namespace

void save_model(const FTJNF &model, const std::string &path) {
  if (path.empty()) throw std::runtime_error("save_model: empty path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out.write(kMagic, 8);

  const ModelConfig &cfg = model.config();
  json j;
  j["f_hidden"] = cfg.f_hidden;
  j["t_hidden"] = cfg.t_hidden;
  j["num_mics"] = cfg.num_mics;
  j["f_bidirectional"] = cfg.f_bidirectional;
  j["size_label"] = cfg.size_label;
  const std::string cfg_str = j.dump();
  write_u32(out, static_cast<uint32_t>(cfg_str.size()));
  out.write(cfg_str.data(), static_cast<std::streamsize>(cfg_str.size()));

  uint32_t num_blobs = cfg.f_bidirectional ? 14 : 10;
  write_u32(out, num_blobs);
  for_each_blob(model.params(), cfg.f_bidirectional,
                [&](const std::string &name, const double *src, double *, size_t n) {
                  write_blob(out, name, src, n);
                });
  if (!out) throw std::runtime_error("save_model: write failed for " + path);
}

FTJNF load_model(const std::string &path, const ModelConfig *expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("load_model: not a model container: " + path);

  const uint32_t cfg_len = read_u32(in);
  std::string cfg_str(cfg_len, '\0');
  in.read(cfg_str.data(), cfg_len);
  if (!in) throw std::runtime_error("load_model: truncated config");
  json j = json::parse(cfg_str);

  ModelConfig cfg;
  cfg.f_hidden = j.at("f_hidden").get<int>();
  cfg.t_hidden = j.at("t_hidden").get<int>();
  cfg.num_mics = j.at("num_mics").get<int>();
  cfg.f_bidirectional = j.at("f_bidirectional").get<bool>();
  cfg.size_label = j.at("size_label").get<std::string>();
  cfg.validate();

  if (expected && !(cfg == *expected))
    throw std::runtime_error("load_model: stored config does not match the expected one");

  FTJNF model(cfg);
  const uint32_t num_blobs = read_u32(in);
  const uint32_t want = cfg.f_bidirectional ? 14 : 10;
  if (num_blobs != want)
    throw std::runtime_error("load_model: unexpected blob count");
  for_each_blob(model.params(), cfg.f_bidirectional,
                [&](const std::string &name, const double *, double *dst, size_t n) {
                  read_blob(in, name, dst, n);
                });
  return model;
}

}  // namespace jnfkd
