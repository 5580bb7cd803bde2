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

#include <cmath>

#include <gtest/gtest.h>

#include "hsbm/analyze.h"

namespace hsbm {
namespace {

SeparabilityInputs Inputs(const Matrix& mhat, double dbar) {
  return SeparabilityInputs::FromParams(HsbmParams::Defaults(mhat, dbar));
}

TEST(Cdf, KnownValues) {
  EXPECT_DOUBLE_EQ(StdNormalCdf(0.0), 0.5);
  EXPECT_NEAR(StdNormalCdf(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(StdNormalCdf(-1.96), 0.024997895148220435, 1e-15);
  EXPECT_NEAR(StdNormalCdf(-40.0), 0.0, 1e-300);
}

TEST(PairwiseAccuracy, BaselineEqualPriors) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.2), 25.0);
  inp.gamma = 2.0;
  inp.sigma = 1.0;
  const PairAccuracy a = PairwiseAccuracyBaseline(inp, 0, 1);
  EXPECT_NEAR(a.e_t, 0.841344746, 1e-9);
  EXPECT_NEAR(a.e_k, 0.841344746, 1e-9);
  EXPECT_NEAR(Separability(inp.eta, 0, 1, a.e_t, a.e_k), 0.841344746, 1e-9);
}

TEST(PairwiseAccuracy, UnequalPriorsShiftBoundary) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.2), 25.0);
  inp.eta = {0.4, 0.1, 0.2, 0.2, 0.1};
  inp.gamma = 2.0;
  inp.sigma = 1.0;
  const PairAccuracy a = PairwiseAccuracyBaseline(inp, 0, 1);
  // Phi(1 + 0.5 ln 4) and Phi(1 - 0.5 ln 4).
  EXPECT_NEAR(a.e_t, StdNormalCdf(1.0 + 0.5 * std::log(4.0)), 1e-15);
  EXPECT_NEAR(a.e_k, StdNormalCdf(1.0 - 0.5 * std::log(4.0)), 1e-15);
  const double s = Separability(inp.eta, 0, 1, a.e_t, a.e_k);
  EXPECT_NEAR(s, 0.8 * a.e_t + 0.2 * a.e_k, 1e-15);
  EXPECT_DOUBLE_EQ(s, Separability(inp.eta, 1, 0, a.e_k, a.e_t));
}

TEST(PairwiseAccuracy, GainScalesRatio) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.2), 25.0);
  inp.gamma = 2.0;
  inp.sigma = 1.0;
  const PairAccuracy a = PairwiseAccuracyWithGain(inp, 0, 1, 3.0, 1.5);
  EXPECT_NEAR(a.e_t, StdNormalCdf(2.0), 1e-15);
  // A gain above varsigma helps, below it hurts.
  EXPECT_GT(PairwiseAccuracyWithGain(inp, 0, 1, 1.3, 1.2).e_t,
            PairwiseAccuracyBaseline(inp, 0, 1).e_t);
  EXPECT_LT(PairwiseAccuracyWithGain(inp, 0, 1, 1.1, 1.2).e_t,
            PairwiseAccuracyBaseline(inp, 0, 1).e_t);
  // Zero gain with equal priors is a coin flip.
  EXPECT_DOUBLE_EQ(PairwiseAccuracyWithGain(inp, 0, 1, 0.0, 1.2).e_t, 0.5);
  EXPECT_THROW(PairwiseAccuracyWithGain(inp, 0, 0, 1.0, 1.0), Error);
}

TEST(GainSingleGc, FamilyAHandValue) {
  const GainReport r = GainSingleGc(Inputs(PatternFamilyA(0.25), 25.0));
  // Row difference (-1/6, -1/4, 5/12, 0, 0) has norm sqrt(38)/12.
  const double f01 = std::sqrt(12.5) * std::sqrt(38.0) / 12.0;
  EXPECT_NEAR(r.gains(0, 1), f01, 1e-13);
  EXPECT_NEAR(r.gains(1, 0), f01, 1e-13);
  EXPECT_EQ(r.gains(2, 2), 0.0);
  // Pairs two steps apart: (a - (1/3 - a), 2a - (1/3 - a), -2a + (1/3 - a), ...)
  const double a = 0.25, o = 1.0 / 3.0 - a;
  const Matrix m = PatternFamilyA(a);
  double sq = 0.0;
  for (int j = 0; j < 5; ++j) sq += (m(2, j) - m(0, j)) * (m(2, j) - m(0, j));
  EXPECT_NEAR(r.gains(0, 2), 5.0 * std::sqrt(sq) / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(sq, 2.0 * (a - o) * (a - o) + 2.0 * (2 * a - o) * (2 * a - o),
              1e-15);
}

TEST(GainSingleGc, ScalesWithRootDegree) {
  const Matrix m = PatternFamilyA(0.22);
  const GainReport a = GainSingleGc(Inputs(m, 25.0));
  const GainReport b = GainSingleGc(Inputs(m, 100.0));
  EXPECT_NEAR(b.gains(0, 1), 2.0 * a.gains(0, 1), 1e-12);
  EXPECT_NEAR(b.min_gain, 2.0 * a.min_gain, 1e-12);
}

TEST(GainSingleGc, UniformPatternIsUseless) {
  const GainReport r = GainSingleGc(Inputs(PatternHomophilous(0.2), 25.0), 1.2);
  EXPECT_NEAR(r.max_gain, 0.0, 1e-15);
  EXPECT_EQ(r.verdict, Verdict::kBad);
}

TEST(GainSingleGc, UnequalDegrees) {
  const Matrix m = Matrix::Identity(2, 2);
  const GainReport r = GainSingleGc(m, {4.0, 9.0});
  EXPECT_NEAR(r.gains(0, 1), std::sqrt(4.0 + 9.0) / std::sqrt(2.0), 1e-15);
}

TEST(GainNoisyGc, ZeroNoiseMatchesSingle) {
  const SeparabilityInputs inp = Inputs(PatternFamilyA(0.25), 25.0);
  const GainReport a = GainSingleGc(inp);
  const GainReport b = GainNoisyGc(inp);
  EXPECT_NEAR((a.gains - b.gains).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(GainNoisyGc, DecreasesWithNoiseAndSaturates) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.25), 25.0);
  double prev = GainNoisyGc(inp).min_gain;
  for (double delta : {0.002, 0.004, 0.006, 0.01, 0.05}) {
    inp.delta = delta;
    const double g = GainNoisyGc(inp).min_gain;
    EXPECT_LT(g, prev);
    prev = g;
  }
  // Effective degree: rho^-2 = 1 / (gamma^2 delta^2 / (2 sigma^2) + 1/D).
  inp.delta = 0.01;
  const double r = 2.0 * 0.01 * 0.01 / (2.0 * 0.6 * 0.6);
  const double eff = 1.0 / (r + 1.0 / 25.0);
  std::vector<double> dbar(5, eff);
  EXPECT_NEAR(GainNoisyGc(inp).gains(0, 1), GainSingleGc(inp.mhat, dbar).gains(0, 1),
              1e-12);
}

TEST(GainNoisyGc, RejectsUnequalDegrees) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.25), 25.0);
  inp.dbar = {25, 25, 25, 25, 30};
  try {
    GainNoisyGc(inp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAssumptionViolation);
  }
  inp.dbar = {25, 25, 25, 25, 27};
  EXPECT_NO_THROW(GainNoisyGc(inp));
}

TEST(MhatPower, MatchesRepeatedProduct) {
  const Matrix m = PatternFamilyA(0.2);
  EXPECT_EQ(MhatPower(m, 0), Matrix(Matrix::Identity(5, 5)));
  const Matrix m3 = m * m * m;
  EXPECT_LT((MhatPower(m, 3) - m3).cwiseAbs().maxCoeff(), 1e-15);
  for (int l : {1, 5, 50}) {
    const Matrix p = MhatPower(m, l);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(p.row(k).sum(), 1.0, 1e-12);
  }
}

TEST(PowerRowDistances, MatchesDirectAtSmallPowers) {
  const Matrix m = PatternFamilyA(0.25);
  const Matrix p = m * m;
  const Matrix d = PowerRowDistances(m, 2);
  EXPECT_NEAR(d(0, 3), (p.row(0) - p.row(3)).norm(), 1e-15);
}

TEST(PowerRowDistances, KeepsPrecisionAfterRowsCoincide) {
  // Second eigenvalue modulus of the uniform-plus-identity mix is 0.5, so the
  // distances shrink by exactly 2 per layer.
  Matrix m = 0.5 * Matrix::Identity(3, 3) + 0.5 * Matrix::Constant(3, 3, 1.0 / 3.0);
  const double d0 = PowerRowDistances(m, 0)(0, 1);
  EXPECT_NEAR(d0, std::sqrt(2.0), 1e-15);
  for (int l : {10, 60, 200, 900}) {
    const double d = PowerRowDistances(m, l)(0, 1);
    EXPECT_NEAR(std::log2(d), std::log2(d0) - l, 1e-9) << l;
  }
}

TEST(GainMultiGcApprox, IdentityPattern) {
  SeparabilityInputs inp = Inputs(Matrix::Identity(5, 5), 25.0);
  const GainReport r = GainMultiGcApprox(inp, 3);
  // sqrt(c * 2 / (c (c - 1) * 2)) * D / ln n with c = 5.
  const double expected = 0.5 * 25.0 / std::log(1000.0);
  EXPECT_NEAR(r.min_gain, expected, 1e-12);
  EXPECT_NEAR(r.max_gain, expected, 1e-12);
}

TEST(GainMultiGcApprox, OneLayerDelegatesWithMeanDegree) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.25), 25.0);
  inp.dbar = {20, 30, 25, 25, 25};
  const GainReport r = GainMultiGcApprox(inp, 1);
  EXPECT_EQ(r.kind, GainKind::kMultiGc);
  EXPECT_NEAR(r.gains(0, 1), GainSingleGc(inp.mhat, std::vector<double>(5, 25.0)).gains(0, 1),
              1e-15);
}

TEST(GainMultiGcApprox, RatiosFollowPowerDistances) {
  SeparabilityInputs inp = Inputs(PatternFamilyA(0.25), 25.0);
  const GainReport r = GainMultiGcApprox(inp, 40);
  const Matrix d = PowerRowDistances(inp.mhat, 40);
  EXPECT_NEAR(r.gains(0, 1) / r.gains(0, 2), d(0, 1) / d(0, 2), 1e-9);
}

TEST(GainMultiGcApprox, DegeneratePatternThrows) {
  SeparabilityInputs inp = Inputs(PatternHomophilous(0.2), 25.0);
  try {
    GainMultiGcApprox(inp, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegeneratePattern);
  }
}

GraphSample SmallGraph(int64_t n, uint64_t seed) {
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.25), 8.0);
  p.n = n;
  return Generate(p, seed);
}

TEST(QFrobenius, IdentityLayer) {
  const GraphSample g = SmallGraph(120, 1);
  const double n = 120.0;
  EXPECT_NEAR(QFrobeniusSquared(g, 0)[0], 2.0 * n * (n - 1.0), 1e-6);
  EXPECT_NEAR(QFrobeniusSquaredPairwise(g, 0), 2.0 * n * (n - 1.0), 1e-6);
}

TEST(QFrobenius, CenteredIdentityMatchesPairwiseSum) {
  for (int64_t n : {70, 130, 300}) {
    const GraphSample g = SmallGraph(n, static_cast<uint64_t>(n));
    const auto series = QFrobeniusSquared(g, 6);
    for (int l = 0; l <= 6; ++l) {
      const double direct = QFrobeniusSquaredPairwise(g, l);
      EXPECT_NEAR(series[l], direct, 1e-9 * direct) << "n=" << n << " l=" << l;
    }
    const double loops = QFrobeniusSquaredPairwise(g, 3, true);
    EXPECT_NEAR(QFrobeniusSquared(g, 3, true)[3], loops, 1e-9 * loops);
  }
}

TEST(QFrobenius, DecreasesWithDepth) {
  const auto s = QFrobeniusSquared(SmallGraph(400, 2), 10);
  for (size_t l = 1; l < s.size(); ++l) EXPECT_LT(s[l], s[l - 1]);
}

TEST(GainMultiGcExact, SeriesMatchesSingleCalls) {
  const GraphSample g = SmallGraph(300, 3);
  const Matrix emp = EmpiricalMhat(g).mhat;
  const auto series = GainMultiGcExactSeries(g, emp, 5, 1.2);
  ASSERT_EQ(series.size(), 6u);
  for (int l : {1, 5}) {
    const GainReport one = GainMultiGcExact(g, l, 1.2);
    EXPECT_LT((one.gains - series[l].gains).cwiseAbs().maxCoeff(), 1e-12);
  }
  // Formula check against an independent evaluation.
  const double q = std::sqrt(QFrobeniusSquaredPairwise(g, 2));
  const Matrix d = PowerRowDistances(emp, 2);
  EXPECT_NEAR(series[2].gains(1, 3), 300.0 / q * d(1, 3), 1e-9);
}

TEST(Verdict, Thresholds) {
  Matrix g(2, 2);
  g << 0, 1.5, 1.5, 0;
  EXPECT_EQ(MakeGainReport(GainKind::kSingleGc, 1, g, 1.2).verdict, Verdict::kGood);
  EXPECT_EQ(MakeGainReport(GainKind::kSingleGc, 1, g, 1.5).verdict, Verdict::kMixed);
  EXPECT_EQ(MakeGainReport(GainKind::kSingleGc, 1, g, 2.0).verdict, Verdict::kBad);
  Matrix h(3, 3);
  h << 0, 1.0, 2.0, 1.0, 0, 1.5, 2.0, 1.5, 0;
  const GainReport r = MakeGainReport(GainKind::kSingleGc, 1, h, 1.2);
  EXPECT_EQ(r.verdict, Verdict::kMixed);
  EXPECT_DOUBLE_EQ(r.min_gain, 1.0);
  EXPECT_DOUBLE_EQ(r.max_gain, 2.0);
}

TEST(Verdict, FamilyASweepEnds) {
  const double vs = kSyntheticVarsigma;
  EXPECT_EQ(GainSingleGc(Inputs(PatternFamilyA(0.0), 25.0), vs).verdict, Verdict::kGood);
  EXPECT_EQ(GainSingleGc(Inputs(PatternFamilyA(0.16), 25.0), vs).verdict,
            Verdict::kBad);
  EXPECT_EQ(GainSingleGc(Inputs(PatternFamilyA(0.32), 25.0), vs).verdict,
            Verdict::kGood);
}

TEST(ErrorBound, HandComputed) {
  Matrix s = Matrix::Ones(3, 3);
  s(0, 1) = s(1, 0) = 0.9;
  s(0, 2) = s(2, 0) = 0.8;
  s(1, 2) = s(2, 1) = 0.7;
  const std::vector<double> eta = {0.5, 0.3, 0.2};
  EXPECT_NEAR(ErrorUpperBound(s, eta), 0.8 * 0.1 + 0.7 * 0.2 + 0.5 * 0.3, 1e-15);
  EXPECT_THROW(ErrorUpperBound(s, {0.5, 0.5}), Error);
}

TEST(Json, ReportShape) {
  const GainReport r = GainSingleGc(Inputs(PatternFamilyA(0.25), 25.0), 1.2);
  const auto j = GainReportToJson(r);
  EXPECT_EQ(j["kind"], "single_gc");
  EXPECT_EQ(j["verdict"], VerdictName(r.verdict));
  EXPECT_EQ(j["gains"].size(), 5u);
  EXPECT_DOUBLE_EQ(j["gains"][0][1].get<double>(), r.gains(0, 1));
}

}  // namespace
}  // namespace hsbm
