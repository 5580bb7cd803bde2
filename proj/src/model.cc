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

#include "hsbm/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "hsbm/rng.h"

namespace hsbm {
namespace {

constexpr double kStochasticTol = 1e-12;

std::string Describe(const char* what, int index, double value) {
  std::ostringstream os;
  os << what << "[" << index << "] = " << value;
  return os.str();
}

// Picks `count` distinct values from [0, pool) uniformly at random.
void SampleDistinct(int64_t pool, int64_t count, Rng& rng,
                    std::vector<int64_t>& out) {
  out.clear();
  if (count <= 0) return;
  if (count * 4 > pool) {
    // Dense draw: partial Fisher-Yates over the whole pool.
    std::vector<int64_t> all(pool);
    std::iota(all.begin(), all.end(), 0);
    for (int64_t j = 0; j < count; ++j) {
      std::uniform_int_distribution<int64_t> pick(j, pool - 1);
      std::swap(all[j], all[pick(rng)]);
    }
    out.assign(all.begin(), all.begin() + count);
    return;
  }
  // Floyd's algorithm.
  std::unordered_set<int64_t> chosen;
  chosen.reserve(static_cast<size_t>(count) * 2);
  for (int64_t j = pool - count; j < pool; ++j) {
    std::uniform_int_distribution<int64_t> pick(0, j);
    const int64_t r = pick(rng);
    const int64_t v = chosen.insert(r).second ? r : j;
    if (v == j) chosen.insert(j);
    out.push_back(v);
  }
}

}  // namespace

HsbmParams HsbmParams::Defaults(const Matrix& mhat, double degree) {
  HsbmParams p;
  p.c = static_cast<int>(mhat.rows());
  p.d = p.c;
  p.eta.assign(p.c, 1.0 / p.c);
  p.mhat = mhat;
  p.dbar.assign(p.c, degree);
  return p;
}

double HsbmParams::gamma() const { return mean_scale * std::sqrt(2.0); }

double HsbmParams::mean_degree() const {
  if (dbar.empty()) return 0.0;
  double total = 0.0;
  for (size_t k = 0; k < dbar.size(); ++k) {
    total += dbar[k] * (eta.size() == dbar.size() ? eta[k] : 1.0 / dbar.size());
  }
  return total;
}

void HsbmParams::Validate() const {
  if (c < 2) throw Error(ErrorCode::kInvalidArgument, "c must be at least 2");
  if (n < c) throw Error(ErrorCode::kInvalidArgument, "n must be at least c");
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "d must be positive");
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be > 0");
  if (!(delta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 0");
  if (!(mean_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mean_scale must be > 0");
  }
  if (static_cast<int>(eta.size()) != c) {
    throw Error(ErrorCode::kShape, "eta must have c entries");
  }
  double eta_sum = 0.0;
  for (int k = 0; k < c; ++k) {
    if (!(eta[k] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, Describe("eta", k, eta[k]));
    }
    eta_sum += eta[k];
  }
  if (std::abs(eta_sum - 1.0) > kStochasticTol) {
    throw Error(ErrorCode::kInvalidArgument, "eta must sum to 1");
  }
  if (mhat.rows() != c || mhat.cols() != c) {
    throw Error(ErrorCode::kShape, "mhat must be c x c");
  }
  for (int k = 0; k < c; ++k) {
    for (int t = 0; t < c; ++t) {
      if (!(mhat(k, t) >= 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "mhat has a negative entry in row " + std::to_string(k));
      }
    }
    if (std::abs(mhat.row(k).sum() - 1.0) > kStochasticTol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mhat row " + std::to_string(k) + " does not sum to 1");
    }
  }
  if (static_cast<int>(dbar.size()) != c) {
    throw Error(ErrorCode::kShape, "dbar must have c entries");
  }
  for (int k = 0; k < c; ++k) {
    if (!(dbar[k] > 0.0) || !(dbar[k] < static_cast<double>(n))) {
      throw Error(ErrorCode::kInvalidArgument, Describe("dbar", k, dbar[k]));
    }
  }
}

Matrix DeriveEdgeProbabilities(const HsbmParams& params) {
  params.Validate();
  const int c = params.c;
  Matrix m(c, c);
  for (int k = 0; k < c; ++k) {
    const double p_bar = params.dbar[k] / static_cast<double>(params.n);
    for (int t = 0; t < c; ++t) {
      m(k, t) = p_bar * params.mhat(k, t) / params.eta[t];
      if (m(k, t) > 1.0) {
        std::ostringstream os;
        os << "edge probability m[" << k << "][" << t << "] = " << m(k, t)
           << " exceeds 1; requested degree is too large for the class sizes";
        throw Error(ErrorCode::kInfeasibleModel, os.str());
      }
    }
  }
  return m;
}

std::vector<int32_t> GraphSample::degrees() const {
  std::vector<int32_t> out(num_nodes());
  for (int64_t i = 0; i < num_nodes(); ++i) out[i] = degree(i);
  return out;
}

int64_t GraphSample::zero_degree_count() const {
  int64_t zeros = 0;
  for (int64_t i = 0; i < num_nodes(); ++i) zeros += degree(i) == 0;
  return zeros;
}

std::vector<int64_t> GraphSample::class_counts() const {
  std::vector<int64_t> counts(num_classes, 0);
  for (int32_t y : labels) ++counts[y];
  return counts;
}

GraphSample GraphSample::FromEdges(
    int num_classes, std::vector<int32_t> labels,
    std::vector<std::pair<int32_t, int32_t>> edges) {
  GraphSample g;
  g.num_classes = num_classes;
  g.labels = std::move(labels);
  const int64_t n = g.num_nodes();
  for (int64_t i = 0; i < n; ++i) {
    if (g.labels[i] < 0 || g.labels[i] >= num_classes) {
      throw Error(ErrorCode::kShape,
                  "label of node " + std::to_string(i) + " is out of range");
    }
  }
  g.offsets.assign(n + 1, 0);
  for (const auto& [src, dst] : edges) {
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      throw Error(ErrorCode::kShape, "edge " + std::to_string(src) + " -> " +
                                         std::to_string(dst) +
                                         " references a node outside [0, n)");
    }
    ++g.offsets[dst + 1];
  }
  for (int64_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  std::vector<int32_t> filled(g.offsets.begin(), g.offsets.end() - 1);
  std::vector<int32_t> raw(edges.size());
  for (const auto& [src, dst] : edges) raw[filled[dst]++] = src;

  // Sort rows and drop duplicates.
  g.neighbors.reserve(raw.size());
  std::vector<int64_t> compact(n + 1, 0);
  for (int64_t i = 0; i < n; ++i) {
    auto first = raw.begin() + g.offsets[i];
    auto last = raw.begin() + g.offsets[i + 1];
    std::sort(first, last);
    last = std::unique(first, last);
    g.neighbors.insert(g.neighbors.end(), first, last);
    compact[i + 1] = static_cast<int64_t>(g.neighbors.size());
  }
  g.offsets = std::move(compact);
  return g;
}

std::vector<int32_t> SampleLabels(const HsbmParams& params, uint64_t seed) {
  double total = 0.0;
  for (double e : params.eta) {
    if (!(e >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative prior");
    total += e;
  }
  if (static_cast<int>(params.eta.size()) != params.c ||
      std::abs(total - 1.0) > kStochasticTol) {
    throw Error(ErrorCode::kInvalidArgument, "eta must be a distribution");
  }
  Rng rng = MakeRng(seed, Stream::kLabels);
  std::discrete_distribution<int32_t> pick(params.eta.begin(),
                                           params.eta.end());
  std::vector<int32_t> labels(params.n);
  for (auto& y : labels) y = pick(rng);
  return labels;
}

std::vector<double> ProjectToSimplex(std::span<const double> perturbed,
                                     std::span<const double> fallback) {
  std::vector<double> out(perturbed.begin(), perturbed.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::max(v, 0.0);
    total += v;
  }
  if (!(total > 0.0)) return {fallback.begin(), fallback.end()};
  for (double& v : out) v /= total;
  return out;
}

GraphSample SampleGraph(const HsbmParams& params,
                        const std::vector<int32_t>& labels, uint64_t seed) {
  params.Validate();
  if (static_cast<int64_t>(labels.size()) != params.n) {
    throw Error(ErrorCode::kShape, "label vector length differs from n");
  }
  const int c = params.c;
  const int64_t n = params.n;
  const bool noisy = params.delta > 0.0;
  const Matrix edge_prob = noisy ? Matrix() : DeriveEdgeProbabilities(params);

  std::vector<std::vector<int32_t>> members(c);
  std::vector<int64_t> position(n);
  for (int64_t i = 0; i < n; ++i) {
    const int32_t y = labels[i];
    if (y < 0 || y >= c) {
      throw Error(ErrorCode::kShape,
                  "label of node " + std::to_string(i) + " is out of range");
    }
    position[i] = static_cast<int64_t>(members[y].size());
    members[y].push_back(static_cast<int32_t>(i));
  }

  GraphSample g;
  g.num_classes = c;
  g.labels = labels;
  g.node_dists.resize(n, c);
  g.offsets.assign(n + 1, 0);
  g.neighbors.reserve(static_cast<size_t>(n * params.mean_degree() * 1.1));

  std::vector<int64_t> picks;
  std::vector<double> target(c);
  for (int64_t i = 0; i < n; ++i) {
    const int k = labels[i];
    for (int t = 0; t < c; ++t) target[t] = params.mhat(k, t);
    if (noisy) {
      Rng noise_rng = MakeRng(seed, Stream::kNoise, static_cast<uint64_t>(i));
      std::normal_distribution<double> noise(0.0, params.delta);
      std::vector<double> perturbed(c);
      for (int t = 0; t < c; ++t) perturbed[t] = target[t] + noise(noise_rng);
      target = ProjectToSimplex(perturbed, target);
    }
    for (int t = 0; t < c; ++t) g.node_dists(i, t) = target[t];

    Rng rng = MakeRng(seed, Stream::kEdges, static_cast<uint64_t>(i));
    const size_t row_start = g.neighbors.size();
    for (int t = 0; t < c; ++t) {
      const auto& pool = members[t];
      if (pool.empty()) continue;
      const bool own = (t == k);
      const int64_t pool_size = static_cast<int64_t>(pool.size()) - own;
      if (pool_size <= 0) continue;
      double p;
      if (noisy) {
        p = params.dbar[k] * target[t] / static_cast<double>(pool.size());
        if (p > 1.0) {
          p = 1.0;
          ++g.capped_probabilities;
        }
      } else {
        p = edge_prob(k, t);
      }
      if (p <= 0.0) continue;
      std::binomial_distribution<int64_t> count_dist(pool_size, p);
      const int64_t count = count_dist(rng);
      SampleDistinct(pool_size, count, rng, picks);
      for (int64_t idx : picks) {
        // Skip node i itself inside its own class.
        if (own && idx >= position[i]) ++idx;
        g.neighbors.push_back(pool[idx]);
      }
    }
    std::sort(g.neighbors.begin() + row_start, g.neighbors.end());
    g.offsets[i + 1] = static_cast<int64_t>(g.neighbors.size());
  }
  return g;
}

Matrix SampleFeatures(const HsbmParams& params,
                      const std::vector<int32_t>& labels, uint64_t seed) {
  if (params.d < params.c) {
    throw Error(ErrorCode::kDimension,
                "feature dimension d must be at least the class count c");
  }
  Rng rng = MakeRng(seed, Stream::kFeatures);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int64_t n = static_cast<int64_t>(labels.size());
  Matrix x(n, params.d);
  for (int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < params.d; ++j) x(i, j) = params.sigma * gauss(rng);
    x(i, labels[i]) += params.mean_scale;
  }
  return x;
}

GraphSample Generate(const HsbmParams& params, uint64_t seed) {
  params.Validate();
  std::vector<int32_t> labels = SampleLabels(params, seed);
  GraphSample g = SampleGraph(params, labels, seed);
  g.features = SampleFeatures(params, g.labels, seed);
  return g;
}

bool IsRowStochastic(const Matrix& m, double tol) {
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    if ((m.row(k).array() < 0.0).any()) return false;
    if (std::abs(m.row(k).sum() - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace hsbm
