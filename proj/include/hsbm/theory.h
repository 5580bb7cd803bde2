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

// Closed-form separability quantities for graph convolution on HSBM graphs.
//
// A graph convolution rescales the effective signal-to-noise ratio gamma/sigma
// of every class-pair boundary (t, k) by a gain F_tk. A pair benefits when its
// gain exceeds the sampling threshold varsigma and loses otherwise. The
// functions here compute those gains for one convolution, one convolution
// under topological noise, and l stacked convolutions.

#ifndef HSBM_THEORY_H_
#define HSBM_THEORY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsbm/common.h"
#include "hsbm/model.h"

namespace hsbm {

// Synthetic experiments sit at about 1.2; real graphs need a lower value
// because features and topology are correlated there.
inline constexpr double kDefaultVarsigma = 1.0;
inline constexpr double kSyntheticVarsigma = 1.2;
inline constexpr double kRealWorldVarsigma = 0.2;

// Largest relative spread of per-class degrees accepted where a formula
// assumes equal degrees.
inline constexpr double kEqualDegreeTolerance = 0.10;

enum class GainKind { kBaseline, kSingleGc, kNoisyGc, kMultiGc };
enum class Verdict { kGood, kMixed, kBad };

const char* GainKindName(GainKind kind);
const char* VerdictName(Verdict verdict);

struct GainReport {
  GainKind kind = GainKind::kSingleGc;
  int layers = 1;
  Matrix gains;  // c x c, symmetric, zero diagonal
  double varsigma = kDefaultVarsigma;
  Verdict verdict = Verdict::kMixed;
  double min_gain = 0.0;
  double max_gain = 0.0;
};

// Fills min/max over off-diagonal pairs and the verdict.
GainReport MakeGainReport(GainKind kind, int layers, Matrix gains,
                          double varsigma);

struct SeparabilityInputs {
  double gamma = 0.0;  // distance between two class means
  double sigma = 0.0;
  std::vector<double> eta;
  std::vector<double> dbar;
  double delta = 0.0;
  Matrix mhat;
  int64_t n = 0;

  static SeparabilityInputs FromParams(const HsbmParams& params);
  void Validate() const;
  double mean_degree() const;
};

// Standard normal CDF.
double StdNormalCdf(double x);

struct PairAccuracy {
  double e_t = 0.0;  // fraction of class-t nodes preferring t over k
  double e_k = 0.0;  // fraction of class-k nodes preferring k over t
};

// Raw features: Phi(gamma/(2 sigma) + (sigma/gamma) ln(eta_t/eta_k)) and the
// swapped term.
PairAccuracy PairwiseAccuracyBaseline(const SeparabilityInputs& inp, int t,
                                      int k);

// After aggregation the ratio gamma/sigma is scaled by gain/varsigma.
PairAccuracy PairwiseAccuracyWithGain(const SeparabilityInputs& inp, int t,
                                      int k, double gain, double varsigma);

// Prior-weighted mean of the two directional accuracies; symmetric in (t, k).
double Separability(const std::vector<double>& eta, int t, int k, double e_t,
                    double e_k);

// F_tk = ||sqrt(D_k) m_k - sqrt(D_t) m_t|| / sqrt(2).
GainReport GainSingleGc(const Matrix& mhat, const std::vector<double>& dbar,
                        double varsigma = kDefaultVarsigma);
GainReport GainSingleGc(const SeparabilityInputs& inp,
                        double varsigma = kDefaultVarsigma);

// F'_tk = ||m_k / rho_k - m_t / rho_t|| / sqrt(2) with
// rho = sqrt(gamma^2 delta^2 / (2 sigma^2) + 1 / D). Uses the mean degree;
// throws kAssumptionViolation if per-class degrees spread by more than
// kEqualDegreeTolerance.
GainReport GainNoisyGc(const SeparabilityInputs& inp,
                       double varsigma = kDefaultVarsigma);

// mhat^l, renormalized when row sums drift.
Matrix MhatPower(const Matrix& mhat, int l);

// ||m_k^(l) - m_t^(l)|| for all pairs. Differences are propagated directly,
// (e_k - e_t)^T mhat^l, so they keep full relative precision long after the
// rows of mhat^l agree to machine epsilon.
Matrix PowerRowDistances(const Matrix& mhat, int l);

// Stacked convolutions, balanced-class closed form:
//   F_tk = sqrt(c ||dm_tk||^2 / sum_{k1,k2} ||dm_k1k2||^2) * D / ln n
// for l > 1; l = 1 delegates to GainSingleGc with the mean degree.
// Throws kDegeneratePattern if every pairwise distance is below 1e-300.
GainReport GainMultiGcApprox(const SeparabilityInputs& inp, int l,
                             double varsigma = kDefaultVarsigma);

// ||Q^(l)||_F^2 = sum_ij ||S_i - S_j||^2 for S = (D^-1 A)^l, for every
// l in [0, max_layers]. Computed as 2n sum_i ||S_i - mean(S)||^2 with
// mean-centred column propagation (zero-degree rows use the identity).
std::vector<double> QFrobeniusSquared(const GraphSample& graph, int max_layers,
                                      bool self_loops = false);
// Direct O(n^2) pairwise sum; reference path for small graphs.
double QFrobeniusSquaredPairwise(const GraphSample& graph, int layers,
                                 bool self_loops = false);

// F_tk = n / ||Q^(l)||_F * ||m_k^(l) - m_t^(l)|| with the supplied mhat.
GainReport GainMultiGcExact(const GraphSample& graph, const Matrix& mhat,
                            int l, double varsigma = kDefaultVarsigma,
                            bool self_loops = false);
// Same, using the graph's empirical neighborhood-distribution matrix.
GainReport GainMultiGcExact(const GraphSample& graph, int l,
                            double varsigma = kDefaultVarsigma);
// Exact gains for l = 0..max_layers in one pass over the graph.
std::vector<GainReport> GainMultiGcExactSeries(const GraphSample& graph,
                                               const Matrix& mhat,
                                               int max_layers,
                                               double varsigma,
                                               bool self_loops = false);

// good iff min > varsigma, bad iff max < varsigma, mixed otherwise.
Verdict ClassifyPattern(const GainReport& report, double varsigma);

// sum_{t<k} (eta_t + eta_k) (1 - S(t, k)).
double ErrorUpperBound(const Matrix& separability,
                       const std::vector<double>& eta);

nlohmann::json GainReportToJson(const GainReport& report);

}  // namespace hsbm

#endif  // HSBM_THEORY_H_
