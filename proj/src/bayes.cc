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

#include <algorithm>
#include <cmath>

#include "hsbm/classify.h"

namespace hsbm {
namespace {

// Class means mean_scale * e_k embedded in R^d.
Matrix ClassMeans(const HsbmParams& p) {
  if (p.d < p.c) {
    throw Error(ErrorCode::kDimension, "feature dimension d must be >= c");
  }
  Matrix mu = Matrix::Zero(p.c, p.d);
  for (int k = 0; k < p.c; ++k) mu(k, k) = p.mean_scale;
  return mu;
}

// Plain left-to-right dot product shared by the Bayes and linear paths so
// that identical formulas round identically.
double Dot(const double* x, const Matrix& m, Eigen::Index row) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) s += x[j] * m(row, j);
  return s;
}

}  // namespace

int ArgmaxLowest(const double* scores, int c) {
  int best = 0;
  for (int k = 1; k < c; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

BayesModel BayesRaw(const HsbmParams& p) {
  p.Validate();
  BayesModel m;
  m.kind = BayesKind::kRaw;
  m.means = ClassMeans(p);
  m.log_prior_terms.resize(p.c);
  for (int k = 0; k < p.c; ++k) {
    m.log_prior_terms[k] = p.sigma * p.sigma * std::log(p.eta[k]);
  }
  return m;
}

BayesModel BayesAggregated(const HsbmParams& p) {
  p.Validate();
  BayesModel m;
  m.kind = BayesKind::kAggregated;
  m.means = p.mhat * ClassMeans(p);
  m.log_prior_terms.resize(p.c);
  m.variance_terms.resize(p.c);
  for (int k = 0; k < p.c; ++k) {
    m.log_prior_terms[k] = std::log(p.eta[k]);
    m.variance_terms[k] = p.sigma * p.sigma / p.dbar[k];
  }
  return m;
}

int Decide(const BayesModel& m, const double* x) {
  const int c = static_cast<int>(m.means.rows());
  const Eigen::Index d = m.means.cols();
  std::vector<double> score(c);
  for (int k = 0; k < c; ++k) {
    if (m.kind == BayesKind::kRaw) {
      score[k] = Dot(x, m.means, k) + m.log_prior_terms[k];
    } else {
      double sq = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double diff = x[j] - m.means(k, j);
        sq += diff * diff;
      }
      const double var = m.variance_terms[k];
      score[k] = m.log_prior_terms[k] - 0.5 * static_cast<double>(d) * std::log(var) -
                 sq / (2.0 * var);
    }
  }
  return ArgmaxLowest(score.data(), c);
}

std::vector<int32_t> Predict(const BayesModel& m, const Matrix& x) {
  if (x.cols() != m.means.cols()) {
    throw Error(ErrorCode::kShape, "input width does not match the model");
  }
  std::vector<int32_t> out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = Decide(m, x.row(i).data());
  return out;
}

int LinearNet::Decide(const double* x) const {
  const int c = static_cast<int>(weight.cols());
  std::vector<double> score(c);
  for (int k = 0; k < c; ++k) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < weight.rows(); ++j) s += x[j] * weight(j, k);
    score[k] = s + bias[k];
  }
  return ArgmaxLowest(score.data(), c);
}

std::vector<int32_t> LinearNet::Predict(const Matrix& x) const {
  if (x.cols() != weight.rows()) {
    throw Error(ErrorCode::kShape, "input width does not match the network");
  }
  std::vector<int32_t> out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = Decide(x.row(i).data());
  return out;
}

LinearNet BayesToLinear(const BayesModel& m) {
  LinearNet net;
  net.weight = m.means.transpose();
  const Eigen::Index c = m.means.rows();
  net.bias.resize(c);
  if (m.kind == BayesKind::kRaw) {
    net.bias = m.log_prior_terms;
    return net;
  }
  const double var = m.variance_terms[0];
  for (Eigen::Index k = 1; k < c; ++k) {
    if (std::abs(m.variance_terms[k] - var) > 1e-12 * var) {
      throw Error(ErrorCode::kAssumptionViolation,
                  "linear form of the aggregated rule needs equal class degrees");
    }
  }
  for (Eigen::Index k = 0; k < c; ++k) {
    net.bias[k] = var * m.log_prior_terms[k] - 0.5 * m.means.row(k).squaredNorm();
  }
  return net;
}

int64_t ConfusionMatrix::total() const {
  int64_t s = 0;
  for (int64_t v : counts) s += v;
  return s;
}

double ConfusionMatrix::accuracy() const {
  const int64_t n = total();
  if (n == 0) return 0.0;
  int64_t hit = 0;
  for (int k = 0; k < num_classes; ++k) hit += at(k, k);
  return static_cast<double>(hit) / static_cast<double>(n);
}

ConfusionMatrix Confusion(const std::vector<int32_t>& predictions,
                          const std::vector<int32_t>& labels,
                          const std::vector<int64_t>& node_set,
                          int num_classes) {
  if (node_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "confusion needs a nonempty node set");
  }
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(static_cast<size_t>(num_classes) * num_classes, 0);
  for (int64_t i : node_set) {
    ++cm.counts[labels[i] * num_classes + predictions[i]];
  }
  return cm;
}

double PearsonCorrelation(const std::vector<double>& x,
                          const std::vector<double>& y, bool* degenerate) {
  const size_t n = x.size();
  if (n != y.size()) throw Error(ErrorCode::kShape, "series lengths differ");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  if (n > 0) {
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
  }
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  // Relative test so that rounding noise in a constant series counts as flat.
  const double ax = std::abs(mx) + 1.0, ay = std::abs(my) + 1.0;
  const bool flat = n < 2 || sxx <= 1e-24 * ax * ax * static_cast<double>(n) ||
                    syy <= 1e-24 * ay * ay * static_cast<double>(n);
  if (degenerate != nullptr) *degenerate = flat;
  if (flat) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

PearsonResult PearsonGainVsConfusion(const GainReport& gains,
                                     const ConfusionMatrix& cm_gcn,
                                     const ConfusionMatrix& cm_mlp) {
  const int c = cm_gcn.num_classes;
  if (cm_mlp.num_classes != c || gains.gains.rows() != c) {
    throw Error(ErrorCode::kShape, "class counts differ between inputs");
  }
  PearsonResult r;
  for (int t = 0; t < c; ++t) {
    for (int k = t + 1; k < c; ++k) {
      r.x.push_back(gains.gains(t, k));
      r.y.push_back(static_cast<double>((cm_gcn.at(t, k) + cm_gcn.at(k, t)) -
                                        (cm_mlp.at(t, k) + cm_mlp.at(k, t))));
    }
  }
  r.value = PearsonCorrelation(r.x, r.y, &r.degenerate);
  return r;
}

}  // namespace hsbm
