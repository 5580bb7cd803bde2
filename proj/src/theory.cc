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

#include "hsbm/theory.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsbm/aggregate.h"
#include "hsbm/analyze.h"

namespace hsbm {
using nlohmann::json;
namespace {

// Columns propagated together when computing ||Q||_F.
constexpr int64_t kColumnBlock = 64;

void CheckPair(int c, int t, int k) {
  if (t < 0 || k < 0 || t >= c || k >= c || t == k) {
    throw Error(ErrorCode::kInvalidArgument, "need two distinct classes");
  }
}

void CheckSquare(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::kShape, "mhat must be a nonempty square matrix");
  }
}

// Direction accuracy for boundary ratio r = gamma/sigma scaled by `scale`.
double DirectionalAccuracy(double gamma, double sigma, double scale,
                           double log_ratio) {
  if (scale <= 0.0) {
    if (log_ratio > 0.0) return 1.0;
    if (log_ratio < 0.0) return 0.0;
    return 0.5;
  }
  return StdNormalCdf(gamma / (2.0 * sigma) * scale +
                      (sigma / gamma) / scale * log_ratio);
}

// Row differences (e_k - e_t)^T mhat^l for every t < k, propagated with a
// shared power-of-two rescaling. Returns the scaled distance matrix and the
// log2 of the factor that undoes the scaling.
Matrix ScaledPowerDistances(const Matrix& mhat, int l, double& log2_scale) {
  CheckSquare(mhat);
  if (l < 0) throw Error(ErrorCode::kInvalidArgument, "l must be >= 0");
  const int c = static_cast<int>(mhat.rows());
  const int pairs = c * (c - 1) / 2;
  Matrix diff = Matrix::Zero(pairs, c);
  int p = 0;
  for (int t = 0; t < c; ++t) {
    for (int k = t + 1; k < c; ++k, ++p) {
      diff(p, k) = 1.0;
      diff(p, t) = -1.0;
    }
  }
  log2_scale = 0.0;
  for (int step = 0; step < l; ++step) {
    diff = (diff * mhat).eval();
    const double peak = diff.cwiseAbs().maxCoeff();
    if (peak > 0.0 && peak < 0x1p-256) {
      int e = 0;
      std::frexp(peak, &e);
      diff *= std::ldexp(1.0, -e);
      log2_scale += e;
    }
  }
  Matrix dist = Matrix::Zero(c, c);
  p = 0;
  for (int t = 0; t < c; ++t) {
    for (int k = t + 1; k < c; ++k, ++p) {
      dist(t, k) = dist(k, t) = diff.row(p).norm();
    }
  }
  return dist;
}

}  // namespace

const char* GainKindName(GainKind kind) {
  switch (kind) {
    case GainKind::kBaseline: return "baseline";
    case GainKind::kSingleGc: return "single_gc";
    case GainKind::kNoisyGc: return "noisy_gc";
    case GainKind::kMultiGc: return "multi_gc";
  }
  return "unknown";
}

const char* VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kGood: return "good";
    case Verdict::kMixed: return "mixed";
    case Verdict::kBad: return "bad";
  }
  return "unknown";
}

GainReport MakeGainReport(GainKind kind, int layers, Matrix gains,
                          double varsigma) {
  GainReport r;
  r.kind = kind;
  r.layers = layers;
  r.varsigma = varsigma;
  const Eigen::Index c = gains.rows();
  for (Eigen::Index k = 0; k < c; ++k) gains(k, k) = 0.0;
  r.gains = std::move(gains);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < c; ++t) {
    for (Eigen::Index k = t + 1; k < c; ++k) {
      lo = std::min(lo, r.gains(t, k));
      hi = std::max(hi, r.gains(t, k));
    }
  }
  if (c < 2) lo = hi = 0.0;
  r.min_gain = lo;
  r.max_gain = hi;
  r.verdict = ClassifyPattern(r, varsigma);
  return r;
}

SeparabilityInputs SeparabilityInputs::FromParams(const HsbmParams& p) {
  SeparabilityInputs inp;
  inp.gamma = p.gamma();
  inp.sigma = p.sigma;
  inp.eta = p.eta;
  inp.dbar = p.dbar;
  inp.delta = p.delta;
  inp.mhat = p.mhat;
  inp.n = p.n;
  return inp;
}

void SeparabilityInputs::Validate() const {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be > 0");
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be > 0");
  if (delta < 0.0) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 0");
  CheckSquare(mhat);
  const size_t c = static_cast<size_t>(mhat.rows());
  if (eta.size() != c || dbar.size() != c) {
    throw Error(ErrorCode::kShape, "eta and dbar must have one entry per class");
  }
}

double SeparabilityInputs::mean_degree() const {
  double s = 0.0;
  for (double d : dbar) s += d;
  return dbar.empty() ? 0.0 : s / static_cast<double>(dbar.size());
}

double StdNormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

PairAccuracy PairwiseAccuracyBaseline(const SeparabilityInputs& inp, int t,
                                      int k) {
  return PairwiseAccuracyWithGain(inp, t, k, 1.0, 1.0);
}

PairAccuracy PairwiseAccuracyWithGain(const SeparabilityInputs& inp, int t,
                                      int k, double gain, double varsigma) {
  CheckPair(static_cast<int>(inp.eta.size()), t, k);
  if (!(varsigma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "varsigma must be > 0");
  }
  const double scale = gain / varsigma;
  const double log_tk = std::log(inp.eta[t] / inp.eta[k]);
  return {DirectionalAccuracy(inp.gamma, inp.sigma, scale, log_tk),
          DirectionalAccuracy(inp.gamma, inp.sigma, scale, -log_tk)};
}

double Separability(const std::vector<double>& eta, int t, int k, double e_t,
                    double e_k) {
  CheckPair(static_cast<int>(eta.size()), t, k);
  const double w = eta[t] + eta[k];
  return eta[t] / w * e_t + eta[k] / w * e_k;
}

GainReport GainSingleGc(const Matrix& mhat, const std::vector<double>& dbar,
                        double varsigma) {
  CheckSquare(mhat);
  const int c = static_cast<int>(mhat.rows());
  if (static_cast<int>(dbar.size()) != c) {
    throw Error(ErrorCode::kShape, "dbar must have one entry per class");
  }
  Matrix gains = Matrix::Zero(c, c);
  for (int t = 0; t < c; ++t) {
    for (int k = t + 1; k < c; ++k) {
      const double f = (std::sqrt(dbar[k]) * mhat.row(k) -
                        std::sqrt(dbar[t]) * mhat.row(t))
                           .norm() /
                       std::sqrt(2.0);
      gains(t, k) = gains(k, t) = f;
    }
  }
  return MakeGainReport(GainKind::kSingleGc, 1, std::move(gains), varsigma);
}

GainReport GainSingleGc(const SeparabilityInputs& inp, double varsigma) {
  inp.Validate();
  return GainSingleGc(inp.mhat, inp.dbar, varsigma);
}

GainReport GainNoisyGc(const SeparabilityInputs& inp, double varsigma) {
  inp.Validate();
  const double mean = inp.mean_degree();
  const auto [lo, hi] = std::minmax_element(inp.dbar.begin(), inp.dbar.end());
  if ((*hi - *lo) > kEqualDegreeTolerance * mean) {
    throw Error(ErrorCode::kAssumptionViolation,
                "noisy gains assume equal class degrees; spread exceeds 10%");
  }
  const double r = inp.gamma * inp.gamma * inp.delta * inp.delta /
                   (2.0 * inp.sigma * inp.sigma);
  const double rho = std::sqrt(r + 1.0 / mean);
  const int c = static_cast<int>(inp.mhat.rows());
  Matrix gains = Matrix::Zero(c, c);
  for (int t = 0; t < c; ++t) {
    for (int k = t + 1; k < c; ++k) {
      const double f =
          (inp.mhat.row(k) / rho - inp.mhat.row(t) / rho).norm() / std::sqrt(2.0);
      gains(t, k) = gains(k, t) = f;
    }
  }
  return MakeGainReport(GainKind::kNoisyGc, 1, std::move(gains), varsigma);
}

Matrix MhatPower(const Matrix& mhat, int l) {
  CheckSquare(mhat);
  if (l < 0) throw Error(ErrorCode::kInvalidArgument, "l must be >= 0");
  Matrix out = Matrix::Identity(mhat.rows(), mhat.cols());
  for (int i = 0; i < l; ++i) {
    out = (out * mhat).eval();
    for (Eigen::Index k = 0; k < out.rows(); ++k) {
      const double s = out.row(k).sum();
      if (std::abs(s - 1.0) > 1e-12 && s > 0.0) out.row(k) /= s;
    }
  }
  return out;
}

Matrix PowerRowDistances(const Matrix& mhat, int l) {
  double log2_scale = 0.0;
  Matrix dist = ScaledPowerDistances(mhat, l, log2_scale);
  if (log2_scale != 0.0) dist *= std::exp2(log2_scale);
  return dist;
}

GainReport GainMultiGcApprox(const SeparabilityInputs& inp, int l,
                             double varsigma) {
  inp.Validate();
  if (l < 1) throw Error(ErrorCode::kInvalidArgument, "l must be >= 1");
  if (l == 1) {
    std::vector<double> equal(inp.dbar.size(), inp.mean_degree());
    GainReport r = GainSingleGc(inp.mhat, equal, varsigma);
    r.kind = GainKind::kMultiGc;
    return r;
  }
  if (inp.n < 2) throw Error(ErrorCode::kInvalidArgument, "n must be >= 2");
  double log2_scale = 0.0;
  const Matrix dist = ScaledPowerDistances(inp.mhat, l, log2_scale);
  const double peak = dist.maxCoeff();
  if (peak == 0.0 || std::log2(peak) + log2_scale < std::log2(1e-300)) {
    throw Error(ErrorCode::kDegeneratePattern,
                "all l-hop neighborhood distributions coincide");
  }
  // Scale out the peak so the squared sum cannot underflow.
  const Matrix unit = dist / peak;
  const double total = unit.squaredNorm();  // all ordered pairs
  const double c = static_cast<double>(inp.mhat.rows());
  const double factor = inp.mean_degree() / std::log(static_cast<double>(inp.n));
  Matrix gains = (c * unit.array().square() / total).sqrt().matrix() * factor;
  return MakeGainReport(GainKind::kMultiGc, l, std::move(gains), varsigma);
}

std::vector<double> QFrobeniusSquared(const GraphSample& graph, int max_layers,
                                      bool self_loops) {
  if (max_layers < 0) throw Error(ErrorCode::kInvalidArgument, "layers must be >= 0");
  const int64_t n = graph.num_nodes();
  std::vector<double> sums(max_layers + 1, 0.0);
  if (n == 0) return sums;
  std::vector<double> cur, next;
  for (int64_t start = 0; start < n; start += kColumnBlock) {
    const int64_t w = std::min(kColumnBlock, n - start);
    cur.assign(static_cast<size_t>(n * w), 0.0);
    next.assign(cur.size(), 0.0);
    for (int64_t j = 0; j < w; ++j) cur[(start + j) * w + j] = 1.0;
    for (int l = 0; l <= max_layers; ++l) {
      if (l > 0) {
        AggregateRows<double>(graph, self_loops, cur.data(), next.data(), w);
        cur.swap(next);
      }
      // Centre every column; P 1 = 1 keeps centring consistent across steps.
      for (int64_t j = 0; j < w; ++j) {
        double mean = 0.0;
        for (int64_t i = 0; i < n; ++i) mean += cur[i * w + j];
        mean /= static_cast<double>(n);
        double sq = 0.0;
        for (int64_t i = 0; i < n; ++i) {
          cur[i * w + j] -= mean;
          sq += cur[i * w + j] * cur[i * w + j];
        }
        sums[l] += sq;
      }
    }
  }
  for (double& s : sums) s *= 2.0 * static_cast<double>(n);
  return sums;
}

double QFrobeniusSquaredPairwise(const GraphSample& graph, int layers,
                                 bool self_loops) {
  const int64_t n = graph.num_nodes();
  std::vector<double> cur(static_cast<size_t>(n * n), 0.0), next(cur.size());
  for (int64_t i = 0; i < n; ++i) cur[i * n + i] = 1.0;
  // Columns of S = P^l are propagated as one n-wide block.
  for (int l = 0; l < layers; ++l) {
    AggregateRows<double>(graph, self_loops, cur.data(), next.data(), n);
    cur.swap(next);
  }
  double total = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      double sq = 0.0;
      for (int64_t m = 0; m < n; ++m) {
        const double d = cur[i * n + m] - cur[j * n + m];
        sq += d * d;
      }
      total += sq;
    }
  }
  return total;
}

GainReport GainMultiGcExact(const GraphSample& graph, const Matrix& mhat,
                            int l, double varsigma, bool self_loops) {
  return GainMultiGcExactSeries(graph, mhat, l, varsigma, self_loops).back();
}

GainReport GainMultiGcExact(const GraphSample& graph, int l, double varsigma) {
  return GainMultiGcExact(graph, EmpiricalMhat(graph).mhat, l, varsigma);
}

std::vector<GainReport> GainMultiGcExactSeries(const GraphSample& graph,
                                               const Matrix& mhat,
                                               int max_layers, double varsigma,
                                               bool self_loops) {
  CheckSquare(mhat);
  const std::vector<double> q2 = QFrobeniusSquared(graph, max_layers, self_loops);
  const double n = static_cast<double>(graph.num_nodes());
  std::vector<GainReport> out;
  out.reserve(q2.size());
  for (int l = 0; l <= max_layers; ++l) {
    Matrix dist = PowerRowDistances(mhat, l);
    const double scale = q2[l] > 0.0 ? n / std::sqrt(q2[l]) : 0.0;
    out.push_back(
        MakeGainReport(GainKind::kMultiGc, l, dist * scale, varsigma));
  }
  return out;
}

Verdict ClassifyPattern(const GainReport& report, double varsigma) {
  if (report.min_gain > varsigma) return Verdict::kGood;
  if (report.max_gain < varsigma) return Verdict::kBad;
  return Verdict::kMixed;
}

double ErrorUpperBound(const Matrix& separability,
                       const std::vector<double>& eta) {
  const Eigen::Index c = separability.rows();
  if (separability.cols() != c || static_cast<Eigen::Index>(eta.size()) != c) {
    throw Error(ErrorCode::kShape, "separability must be c x c with c priors");
  }
  double bound = 0.0;
  for (Eigen::Index t = 0; t < c; ++t) {
    for (Eigen::Index k = t + 1; k < c; ++k) {
      bound += (eta[t] + eta[k]) * (1.0 - separability(t, k));
    }
  }
  return bound;
}

json GainReportToJson(const GainReport& r) {
  json gains = json::array();
  for (Eigen::Index t = 0; t < r.gains.rows(); ++t) {
    json row = json::array();
    for (Eigen::Index k = 0; k < r.gains.cols(); ++k) row.push_back(r.gains(t, k));
    gains.push_back(row);
  }
  json j = {{"kind", GainKindName(r.kind)},
            {"gains", gains},
            {"varsigma", r.varsigma},
            {"verdict", VerdictName(r.verdict)},
            {"min_gain", r.min_gain},
            {"max_gain", r.max_gain}};
  if (r.kind == GainKind::kMultiGc) j["layers"] = r.layers;
  return j;
}

}  // namespace hsbm
