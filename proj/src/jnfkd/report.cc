// src/jnfkd/report.cc

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

#include "jnfkd/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace jnfkd {

namespace {

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("report: cannot open " + path);
  return out;
}

nlohmann::json metric_json(const MetricResult &m) {
  return nlohmann::json{{"metric", m.metric},
                        {"model", m.model_label},
                        {"snr_db", m.snr_db},
                        {"n", m.values.size()},
                        {"median", m.median_value},
                        {"variance", m.variance_value},
                        {"errors", m.error_count},
                        {"values", m.values}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// shared plot scaffolding
struct Frame {
  static constexpr int kWidth = 640, kHeight = 420;
  static constexpr int kLeft = 64, kRight = 600, kTop = 24, kBottom = 372;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double sx(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  }
  double sy(double y) const {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  }
};

const char *palette(size_t i) {
  static const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
}

void svg_header(std::ostream &os, const std::string &title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::kWidth
     << "\" height=\"" << Frame::kHeight << "\" viewBox=\"0 0 " << Frame::kWidth
     << " " << Frame::kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << Frame::kWidth / 2
     << "\" y=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">"
     << title << "</text>\n";
}

void svg_axes(std::ostream &os, const Frame &f, const std::string &x_label,
              const std::string &y_label) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n"
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                Frame::kLeft, Frame::kBottom, Frame::kRight, Frame::kBottom,
                Frame::kLeft, Frame::kTop, Frame::kLeft, Frame::kBottom);
  os << buf;
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y_min + (f.y_max - f.y_min) * i / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" "
                  "stroke=\"#cccccc\"/>\n"
                  "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" "
                  "font-family=\"sans-serif\" font-size=\"10\">%.3g</text>\n",
                  Frame::kLeft, f.sy(y), Frame::kRight, f.sy(y), Frame::kLeft - 6,
                  f.sy(y) + 3, y);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" "
                "font-family=\"sans-serif\" font-size=\"11\">%s</text>\n"
                "<text x=\"14\" y=\"%d\" text-anchor=\"middle\" "
                "font-family=\"sans-serif\" font-size=\"11\" "
                "transform=\"rotate(-90 14 %d)\">%s</text>\n",
                (Frame::kLeft + Frame::kRight) / 2, Frame::kHeight - 8,
                x_label.c_str(), (Frame::kTop + Frame::kBottom) / 2,
                (Frame::kTop + Frame::kBottom) / 2, y_label.c_str());
  os << buf;
}

void svg_legend(std::ostream &os, const std::vector<std::string> &labels) {
  char buf[256];
  for (size_t i = 0; i < labels.size(); ++i) {
    const int y = Frame::kTop + 14 + static_cast<int>(i) * 14;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"10\" height=\"10\" "
                  "fill=\"%s\"/>\n"
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                  "font-size=\"10\">%s</text>\n",
                  Frame::kRight - 120, y - 9, palette(i), Frame::kRight - 106, y,
                  labels[i].c_str());
    os << buf;
  }
}

struct Series {
  std::string label;
  std::vector<double> x, y, dev;
};

void svg_series(std::ostream &os, const Frame &f, const std::vector<Series> &series) {
  char buf[256];
  for (size_t s = 0; s < series.size(); ++s) {
    const Series &sr = series[s];
    std::ostringstream pts;
    for (size_t i = 0; i < sr.x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", f.sx(sr.x[i]), f.sy(sr.y[i]));
      pts << buf;
    }
    os << "<polyline fill=\"none\" stroke=\"" << palette(s) << "\" stroke-width=\"1.5\" points=\""
       << pts.str() << "\"/>\n";
    for (size_t i = 0; i < sr.x.size(); ++i) {
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"2.5\" fill=\"%s\"/>\n",
                    f.sx(sr.x[i]), f.sy(sr.y[i]), palette(s));
      os << buf;
      if (i < sr.dev.size() && sr.dev[i] > 0) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"%s\" stroke-width=\"1\"/>\n",
                      f.sx(sr.x[i]), f.sy(sr.y[i] - sr.dev[i]), f.sx(sr.x[i]),
                      f.sy(sr.y[i] + sr.dev[i]), palette(s));
        os << buf;
      }
    }
  }
}

Frame fit_frame(const std::vector<Series> &series) {
  Frame f;
  bool first = true;
  for (const Series &s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double lo = s.y[i] - (i < s.dev.size() ? s.dev[i] : 0.0);
      const double hi = s.y[i] + (i < s.dev.size() ? s.dev[i] : 0.0);
      if (first) {
        f.x_min = f.x_max = s.x[i];
        f.y_min = lo;
        f.y_max = hi;
        first = false;
      } else {
        f.x_min = std::min(f.x_min, s.x[i]);
        f.x_max = std::max(f.x_max, s.x[i]);
        f.y_min = std::min(f.y_min, lo);
        f.y_max = std::max(f.y_max, hi);
      }
    }
  if (first) throw std::invalid_argument("plot: no data points");
  if (f.x_max == f.x_min) {
    f.x_min -= 1;
    f.x_max += 1;
  }
  const double pad = (f.y_max == f.y_min) ? 1.0 : 0.05 * (f.y_max - f.y_min);
  f.y_min -= pad;
  f.y_max += pad;
  return f;
}

}  // namespace

void write_snr_report_jsonl(const SnrReport &report, const std::string &path) {
  std::ofstream out = open_out(path);
  for (const MetricResult &m : report.rows) {
    nlohmann::json j = metric_json(m);
    j["type"] = "snr";
    out << j.dump() << "\n";
  }
}

void write_size_report_jsonl(const SizeReport &report, const std::string &path) {
  std::ofstream out = open_out(path);
  for (const SizeRow &row : report.rows) {
    if (row.absent) {
      nlohmann::json j{{"type", "size"},
                       {"model", row.model_label},
                       {"method", row.method_label},
                       {"macs_per_frame", row.macs_per_frame},
                       {"snr_db", report.snr_db},
                       {"absent", true}};
      if (row.preset) j["preset"] = std::string(1, row.preset);
      out << j.dump() << "\n";
      continue;
    }
    for (const MetricResult &m : row.metrics) {
      nlohmann::json j = metric_json(m);
      j["type"] = "size";
      j["method"] = row.method_label;
      j["macs_per_frame"] = row.macs_per_frame;
      j["absent"] = false;
      if (row.preset) j["preset"] = std::string(1, row.preset);
      out << j.dump() << "\n";
    }
  }
}

namespace {

MetricResult metric_from_json(const nlohmann::json &j) {
  MetricResult m;
  m.metric = j.at("metric").get<std::string>();
  m.model_label = j.at("model").get<std::string>();
  m.snr_db = j.at("snr_db").get<double>();
  m.values = j.at("values").get<std::vector<double>>();
  m.median_value = j.at("median").get<double>();
  m.variance_value = j.at("variance").get<double>();
  m.error_count = j.at("errors").get<int>();
  return m;
}

std::vector<nlohmann::json> read_jsonl(const std::string &path,
                                       const std::string &expected_type) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("report: cannot read " + path);
  std::vector<nlohmann::json> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.at("type").get<std::string>() != expected_type)
      throw std::runtime_error("report: unexpected row type in " + path);
    lines.push_back(std::move(j));
  }
  return lines;
}

}  // namespace

SnrReport read_snr_report_jsonl(const std::string &path) {
  SnrReport report;
  for (const nlohmann::json &j : read_jsonl(path, "snr"))
    report.rows.push_back(metric_from_json(j));
  return report;
}

SizeReport read_size_report_jsonl(const std::string &path) {
  SizeReport report;
  std::map<std::string, size_t> index;
  bool have_snr = false;
  for (const nlohmann::json &j : read_jsonl(path, "size")) {
    const std::string model = j.at("model").get<std::string>();
    auto [it, inserted] = index.try_emplace(model, report.rows.size());
    if (inserted) {
      SizeRow row;
      row.model_label = model;
      row.method_label = j.at("method").get<std::string>();
      row.macs_per_frame = j.at("macs_per_frame").get<long long>();
      row.absent = j.value("absent", false);
      const std::string preset = j.value("preset", std::string());
      row.preset = preset.empty() ? 0 : preset[0];
      report.rows.push_back(std::move(row));
    }
    if (!j.value("absent", false)) {
      report.rows[it->second].metrics.push_back(metric_from_json(j));
      if (!have_snr) {
        report.snr_db = j.at("snr_db").get<double>();
        have_snr = true;
      }
    } else if (!have_snr && j.contains("snr_db")) {
      report.snr_db = j.at("snr_db").get<double>();
      have_snr = true;
    }
  }
  return report;
}

std::string render_snr_report_text(const SnrReport &report) {
  std::ostringstream os;
  os << "metric        model             snr_db    median   variance    n  errors\n";
  char buf[160];
  for (const MetricResult &m : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-12s  %-16s %7.1f  %8s  %9s  %3zu  %6d\n",
                  m.metric.c_str(), m.model_label.c_str(), m.snr_db,
                  fmt(m.median_value).c_str(), fmt(m.variance_value).c_str(),
                  m.values.size(), m.error_count);
    os << buf;
  }
  return os.str();
}

std::string render_size_report_text(const SizeReport &report) {
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "quality versus compute at %.1f dB SNR\n",
                report.snr_db);
  os << buf;
  os << "model         method    MACs/frame    metric        median   variance\n";
  for (const SizeRow &row : report.rows) {
    if (row.absent) {
      std::snprintf(buf, sizeof(buf), "%-12s  %-8s  %10lld    (absent)\n",
                    row.model_label.c_str(), row.method_label.c_str(),
                    row.macs_per_frame);
      os << buf;
      continue;
    }
    for (const MetricResult &m : row.metrics) {
      std::snprintf(buf, sizeof(buf), "%-12s  %-8s  %10lld    %-12s %8s  %9s\n",
                    row.model_label.c_str(), row.method_label.c_str(),
                    row.macs_per_frame, m.metric.c_str(), fmt(m.median_value).c_str(),
                    fmt(m.variance_value).c_str());
      os << buf;
    }
  }
  return os.str();
}

void write_snr_svg(const SnrReport &report, const std::string &metric,
                   const std::string &path) {
  // series keyed by model in first-appearance order
  std::vector<Series> series;
  std::map<std::string, size_t> index;
  for (const MetricResult &m : report.rows) {
    if (m.metric != metric) continue;
    auto [it, inserted] = index.try_emplace(m.model_label, series.size());
    if (inserted) series.push_back(Series{m.model_label, {}, {}, {}});
    Series &s = series[it->second];
    s.x.push_back(m.snr_db);
    s.y.push_back(m.median_value);
    s.dev.push_back(std::sqrt(std::max(0.0, m.variance_value)));
  }
  const Frame f = fit_frame(series);

  std::ofstream out = open_out(path);
  svg_header(out, "median " + metric + " per SNR");
  svg_axes(out, f, "SNR [dB]", metric);
  char buf[160];
  for (const Series &s : series)
    for (double x : s.x) {
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" "
                    "font-family=\"sans-serif\" font-size=\"10\">%.0f</text>\n",
                    f.sx(x), Frame::kBottom + 14, x);
      out << buf;
    }
  svg_series(out, f, series);
  std::vector<std::string> labels;
  for (const Series &s : series) labels.push_back(s.label);
  svg_legend(out, labels);
  out << "</svg>\n";
}

void write_size_svg(const SizeReport &report, const std::string &metric,
                    const std::string &path) {
  auto metric_of = [&](const SizeRow &row) -> const MetricResult * {
    for (const MetricResult &m : row.metrics)
      if (m.metric == metric) return &m;
    return nullptr;
  };

  // students grouped per method, x = log10(MACs); teacher is a reference line
  std::vector<Series> series;
  std::map<std::string, size_t> index;
  const SizeRow *teacher = nullptr;
  for (const SizeRow &row : report.rows) {
    if (row.method_label == "teacher") {
      teacher = &row;
      continue;
    }
    if (row.absent) continue;
    const MetricResult *m = metric_of(row);
    if (!m) continue;
    auto [it, inserted] = index.try_emplace(row.method_label, series.size());
    if (inserted) series.push_back(Series{row.method_label, {}, {}, {}});
    Series &s = series[it->second];
    s.x.push_back(std::log10(static_cast<double>(row.macs_per_frame)));
    s.y.push_back(m->median_value);
    s.dev.push_back(std::sqrt(std::max(0.0, m->variance_value)));
  }
  for (Series &s : series) {
    std::vector<size_t> order(s.x.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return s.x[a] < s.x[b]; });
    Series sorted{s.label, {}, {}, {}};
    for (size_t i : order) {
      sorted.x.push_back(s.x[i]);
      sorted.y.push_back(s.y[i]);
      sorted.dev.push_back(s.dev[i]);
    }
    s = sorted;
  }
  Frame f = fit_frame(series);
  if (teacher && !teacher->absent) {
    const MetricResult *tm = metric_of(*teacher);
    if (tm) {
      f.y_min = std::min(f.y_min, tm->median_value - 0.5);
      f.y_max = std::max(f.y_max, tm->median_value + 0.5);
    }
  }

  std::ofstream out = open_out(path);
  char buf[200];
  std::snprintf(buf, sizeof(buf), "median %s versus MACs/frame at %.1f dB SNR",
                metric.c_str(), report.snr_db);
  svg_header(out, buf);
  svg_axes(out, f, "log10 MACs per frame", metric);
  svg_series(out, f, series);
  std::vector<std::string> labels;
  for (const Series &s : series) labels.push_back(s.label);
  if (teacher && !teacher->absent) {
    const MetricResult *tm = metric_of(*teacher);
    if (tm) {
      std::snprintf(buf, sizeof(buf),
                    "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" "
                    "stroke=\"black\" stroke-dasharray=\"5,4\"/>\n"
                    "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" "
                    "font-family=\"sans-serif\" font-size=\"10\">%s</text>\n",
                    Frame::kLeft, f.sy(tm->median_value), Frame::kRight,
                    f.sy(tm->median_value), Frame::kRight,
                    f.sy(tm->median_value) - 4, teacher->model_label.c_str());
      out << buf;
    }
  }
  svg_legend(out, labels);
  out << "</svg>\n";
}

}  // namespace jnfkd
