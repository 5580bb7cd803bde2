// Copyright 2026 The HSBM Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hsbm/analyze.h"

#include <cmath>
#include <sstream>

namespace hsbm {
using nlohmann::json;
namespace {

void RequireNonEmptyClasses(const std::vector<int64_t>& counts) {
  for (size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorCode::kEmptyClass,
                  "class " + std::to_string(k) + " has no nodes");
    }
  }
}

// Normalized neighbor-class histogram of node i into `hist` (size c).
void NodeHistogram(const GraphSample& g, int64_t i, std::vector<double>& hist) {
  std::fill(hist.begin(), hist.end(), 0.0);
  const auto nbrs = g.in_neighbors(i);
  for (int32_t j : nbrs) hist[g.labels[j]] += 1.0;
  const double inv = 1.0 / static_cast<double>(nbrs.size());
  for (double& h : hist) h *= inv;
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

EmpiricalPattern EmpiricalMhat(const GraphSample& g) {
  const int c = g.num_classes;
  EmpiricalPattern out;
  out.class_counts = g.class_counts();
  RequireNonEmptyClasses(out.class_counts);
  out.mhat = Matrix::Zero(c, c);
  out.class_degrees.assign(c, 0.0);
  std::vector<int64_t> with_edges(c, 0);
  std::vector<double> hist(c);
  for (int64_t i = 0; i < g.num_nodes(); ++i) {
    const int32_t y = g.labels[i];
    out.class_degrees[y] += g.degree(i);
    if (g.degree(i) == 0) continue;
    NodeHistogram(g, i, hist);
    for (int t = 0; t < c; ++t) out.mhat(y, t) += hist[t];
    ++with_edges[y];
  }
  for (int k = 0; k < c; ++k) {
    out.class_degrees[k] /= static_cast<double>(out.class_counts[k]);
    if (with_edges[k] > 0) out.mhat.row(k) /= static_cast<double>(with_edges[k]);
  }
  return out;
}

double HomophilyRatio(const GraphSample& g) {
  double sum = 0.0;
  int64_t counted = 0;
  for (int64_t i = 0; i < g.num_nodes(); ++i) {
    const auto nbrs = g.in_neighbors(i);
    if (nbrs.empty()) continue;
    int64_t same = 0;
    for (int32_t j : nbrs) same += g.labels[j] == g.labels[i];
    sum += static_cast<double>(same) / static_cast<double>(nbrs.size());
    ++counted;
  }
  return counted > 0 ? sum / static_cast<double>(counted) : 0.0;
}

std::vector<double> EstimateNoise(const GraphSample& g) {
  const int c = g.num_classes;
  RequireNonEmptyClasses(g.class_counts());
  // Two passes per class: mean then squared deviation.
  Matrix mean = Matrix::Zero(c, c);
  std::vector<int64_t> with_edges(c, 0);
  std::vector<double> hist(c);
  for (int64_t i = 0; i < g.num_nodes(); ++i) {
    if (g.degree(i) == 0) continue;
    NodeHistogram(g, i, hist);
    for (int t = 0; t < c; ++t) mean(g.labels[i], t) += hist[t];
    ++with_edges[g.labels[i]];
  }
  for (int k = 0; k < c; ++k) {
    if (with_edges[k] > 0) mean.row(k) /= static_cast<double>(with_edges[k]);
  }
  Matrix var = Matrix::Zero(c, c);
  for (int64_t i = 0; i < g.num_nodes(); ++i) {
    if (g.degree(i) == 0) continue;
    NodeHistogram(g, i, hist);
    const int32_t y = g.labels[i];
    for (int t = 0; t < c; ++t) {
      const double dev = hist[t] - mean(y, t);
      var(y, t) += dev * dev;
    }
  }
  std::vector<double> out(c, 0.0);
  for (int k = 0; k < c; ++k) {
    if (with_edges[k] < 2) continue;
    double s = 0.0;
    for (int t = 0; t < c; ++t) {
      s += std::sqrt(var(k, t) / static_cast<double>(with_edges[k]));
    }
    out[k] = s / c;
  }
  return out;
}

GraphStats ComputeGraphStats(const GraphSample& g) {
  GraphStats s;
  s.n = g.num_nodes();
  s.c = g.num_classes;
  s.num_edges = g.num_edges();
  s.zero_degree_count = g.zero_degree_count();
  s.homophily_ratio = HomophilyRatio(g);
  s.avg_degree =
      s.n > 0 ? static_cast<double>(s.num_edges) / static_cast<double>(s.n) : 0;
  EmpiricalPattern p = EmpiricalMhat(g);
  s.class_degrees = std::move(p.class_degrees);
  s.empirical_mhat = std::move(p.mhat);
  s.class_counts = std::move(p.class_counts);
  s.noise_std = EstimateNoise(g);
  return s;
}

AuditResult Audit(const GraphSample& g, double varsigma) {
  AuditResult r;
  r.stats = ComputeGraphStats(g);
  r.gains = GainSingleGc(r.stats.empirical_mhat, r.stats.class_degrees,
                         varsigma);
  return r;
}

json GraphStatsToJson(const GraphStats& s) {
  return json{{"n", s.n},
              {"c", s.c},
              {"num_edges", s.num_edges},
              {"zero_degree_count", s.zero_degree_count},
              {"homophily_ratio", s.homophily_ratio},
              {"avg_degree", s.avg_degree},
              {"class_degrees", s.class_degrees},
              {"empirical_mhat", MatrixToJson(s.empirical_mhat)},
              {"noise_std", s.noise_std},
              {"class_counts", s.class_counts}};
}

json AuditToJson(const AuditResult& r) {
  return json{{"stats", GraphStatsToJson(r.stats)},
              {"gains", GainReportToJson(r.gains)}};
}

std::string PairGainsCsv(const GainReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "t,k,gain\n";
  for (Eigen::Index t = 0; t < report.gains.rows(); ++t) {
    for (Eigen::Index k = t + 1; k < report.gains.cols(); ++k) {
      os << t << "," << k << "," << report.gains(t, k) << "\n";
    }
  }
  return os.str();
}

}  // namespace hsbm
