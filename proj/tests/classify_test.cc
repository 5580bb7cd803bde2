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

#include "hsbm/classify.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace hsbm {
namespace {

double Accuracy(const std::vector<int32_t>& pred,
                const std::vector<int32_t>& labels,
                const std::vector<int64_t>& nodes) {
  int64_t hit = 0;
  for (int64_t i : nodes) hit += pred[i] == labels[i];
  return 100.0 * static_cast<double>(hit) / static_cast<double>(nodes.size());
}

std::vector<int64_t> All(int64_t n) {
  std::vector<int64_t> v(n);
  for (int64_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

TEST(Argmax, LowestIndexWinsTies) {
  const double s[] = {1.0, 3.0, 3.0, 2.0};
  EXPECT_EQ(ArgmaxLowest(s, 4), 1);
}

TEST(BayesRaw, ScoresByHand) {
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.2));
  p.eta = {0.4, 0.15, 0.15, 0.15, 0.15};
  const BayesModel m = BayesRaw(p);
  // Midpoint between mu_0 and mu_1 tips towards the larger prior.
  const double x[] = {0.5, 0.5, 0.0, 0.0, 0.0};
  EXPECT_EQ(Decide(m, x), 0);
  // The boundary moves by sigma^2 ln(eta_0/eta_1) along e_1 - e_0.
  const double shift = 0.36 * std::log(0.4 / 0.15);
  const double y[] = {0.5 - shift / 2 - 1e-9, 0.5 + shift / 2 + 1e-9, 0, 0, 0};
  EXPECT_EQ(Decide(m, y), 1);
  const double z[] = {0.5 - shift / 2 + 1e-6, 0.5 + shift / 2 - 1e-6, 0, 0, 0};
  EXPECT_EQ(Decide(m, z), 0);
}

TEST(BayesRaw, SampleAccuracyMatchesClosedForm) {
  // Equal priors, orthogonal means at distance sqrt(2): a node is correct when
  // its own coordinate beats the other four, P = E[Phi((1 + sigma Z)/sigma)^4].
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.2));
  p.n = 200000;
  p.sigma = 0.6;
  const auto labels = SampleLabels(p, 1);
  const Matrix x = SampleFeatures(p, labels, 1);
  const auto pred = Predict(BayesRaw(p), x);
  // Gauss-Hermite-free oracle: midpoint rule on a fine grid of z.
  double expected = 0.0;
  const double h = 1e-3;
  for (double z = -9.0; z < 9.0; z += h) {
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    expected += h * phi * std::pow(StdNormalCdf((1.0 + p.sigma * z) / p.sigma), 4);
  }
  const double acc = Accuracy(pred, labels, All(p.n)) / 100.0;
  EXPECT_NEAR(acc, expected, 4.0 * std::sqrt(expected * (1 - expected) / p.n));
}

TEST(BayesAggregated, Means) {
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.25), 25.0);
  const BayesModel m = BayesAggregated(p);
  EXPECT_EQ(m.means, p.mhat);  // unit means, so mu~ = mhat
  EXPECT_NEAR(m.variance_terms[0], 0.36 / 25.0, 1e-15);
}

TEST(BayesToLinear, SamePredictionsAsClosedForm) {
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.27), 25.0);
  p.eta = {0.3, 0.1, 0.2, 0.25, 0.15};
  const GraphSample g = Generate(p, 2);
  const BayesModel raw = BayesRaw(p);
  EXPECT_EQ(Predict(raw, g.features), BayesToLinear(raw).Predict(g.features));
  const Matrix agg = AggregateOnce(g, g.features, {});
  const BayesModel bagg = BayesAggregated(p);
  const auto closed = Predict(bagg, agg);
  const auto linear = BayesToLinear(bagg).Predict(agg);
  int64_t differ = 0;
  for (size_t i = 0; i < closed.size(); ++i) differ += closed[i] != linear[i];
  // Rounding can only flip exact ties.
  EXPECT_EQ(differ, 0);
}

TEST(BayesToLinear, RejectsUnequalVariances) {
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.27), 25.0);
  p.dbar = {20, 25, 25, 25, 30};
  try {
    BayesToLinear(BayesAggregated(p));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAssumptionViolation);
  }
}

TEST(BayesAggregated, BeatsRawWhenGainsAreGood) {
  for (double a : {0.0, 0.32}) {
    HsbmParams p = HsbmParams::Defaults(PatternFamilyA(a), 25.0);
    p.n = 5000;
    const GraphSample g = Generate(p, 3);
    const double raw = Accuracy(Predict(BayesRaw(p), g.features), g.labels, All(p.n));
    const Matrix agg = AggregateOnce(g, g.features, {});
    const double gc = Accuracy(Predict(BayesAggregated(p), agg), g.labels, All(p.n));
    EXPECT_GT(gc, raw + 10.0) << a;
  }
  // And loses where every gain sits below one.
  HsbmParams p = HsbmParams::Defaults(PatternFamilyA(0.16), 25.0);
  p.n = 5000;
  const GraphSample g = Generate(p, 3);
  const double raw = Accuracy(Predict(BayesRaw(p), g.features), g.labels, All(p.n));
  const Matrix agg = AggregateOnce(g, g.features, {});
  const double gc = Accuracy(Predict(BayesAggregated(p), agg), g.labels, All(p.n));
  EXPECT_LT(gc, raw);
}

TEST(Confusion, CountsAndAccuracy) {
  const std::vector<int32_t> labels = {0, 0, 1, 1, 2};
  const std::vector<int32_t> pred = {0, 1, 1, 1, 0};
  const ConfusionMatrix cm = Confusion(pred, labels, {0, 1, 2, 4}, 3);
  EXPECT_EQ(cm.total(), 4);
  EXPECT_EQ(cm.at(0, 0), 1);
  EXPECT_EQ(cm.at(0, 1), 1);
  EXPECT_EQ(cm.at(1, 1), 1);
  EXPECT_EQ(cm.at(2, 0), 1);
  EXPECT_DOUBLE_EQ(cm.accuracy(), 0.5);
}

TEST(Pearson, KnownValues) {
  bool degenerate = true;
  EXPECT_NEAR(PearsonCorrelation({1, 2, 3, 4}, {2, 4, 6, 8}, &degenerate), 1.0,
              1e-15);
  EXPECT_FALSE(degenerate);
  EXPECT_NEAR(PearsonCorrelation({1, 2, 3}, {3, 1, 2}, &degenerate), -0.5, 1e-15);
  PearsonCorrelation({1, 1, 1}, {1, 2, 3}, &degenerate);
  EXPECT_TRUE(degenerate);
}

TEST(Pearson, GainVsConfusionPairs) {
  Matrix g(3, 3);
  g << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  const GainReport r = MakeGainReport(GainKind::kSingleGc, 1, g, 1.2);
  ConfusionMatrix gcn{3, {10, 1, 0, 2, 10, 1, 0, 0, 10}};
  ConfusionMatrix mlp{3, {10, 2, 2, 2, 10, 2, 2, 2, 10}};
  const PearsonResult p = PearsonGainVsConfusion(r, gcn, mlp);
  ASSERT_EQ(p.x.size(), 3u);
  EXPECT_EQ(p.x, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(p.y, (std::vector<double>{-1, -4, -3}));
}

TEST(Split, PartitionIsDisjointSortedAndSeeded) {
  const Split s = MakeSplit(1001, 4);
  EXPECT_EQ(s.train.size(), 600u);
  EXPECT_EQ(s.val.size(), 200u);
  EXPECT_EQ(s.test.size(), 201u);
  std::set<int64_t> all;
  for (const auto* part : {&s.train, &s.val, &s.test}) {
    EXPECT_TRUE(std::is_sorted(part->begin(), part->end()));
    all.insert(part->begin(), part->end());
  }
  EXPECT_EQ(all.size(), 1001u);
  EXPECT_EQ(MakeSplit(1001, 4).test, s.test);
  EXPECT_NE(MakeSplit(1001, 5).test, s.test);
  EXPECT_THROW(MakeSplit(10, 0, 0.8, 0.3), Error);
}

TEST(TrainConfig, JsonRoundTripAndValidation) {
  TrainConfig cfg = TrainConfig::RealWorldGrid();
  const TrainConfig back = TrainConfigFromJson(TrainConfigToJson(cfg));
  EXPECT_EQ(back.hidden, cfg.hidden);
  EXPECT_EQ(back.weight_decay, cfg.weight_decay);
  EXPECT_EQ(back.dropout, cfg.dropout);
  const TrainConfig scalar = TrainConfigFromJson({{"lr", 0.01}, {"hidden", 8}});
  EXPECT_EQ(scalar.lr, std::vector<double>{0.01});
  EXPECT_EQ(scalar.hidden, std::vector<int>{8});
  EXPECT_EQ(TrainConfigFromJson({{"grid", "real_world"}}).hidden.size(), 5u);
  for (const auto& bad : {nlohmann::json{{"lr", -1.0}},
                          nlohmann::json{{"dropout", 1.0}},
                          nlohmann::json{{"epochs", 0}},
                          nlohmann::json{{"optimizer", "lbfgs"}},
                          nlohmann::json{{"hidden", "big"}}}) {
    try {
      TrainConfigFromJson(bad);
      FAIL() << bad.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig) << bad.dump();
    }
  }
}

class TrainingTest : public ::testing::Test {
 protected:
  void SetUp() override {
    params_ = HsbmParams::Defaults(PatternFamilyA(0.3), 25.0);
    graph_ = Generate(params_, 12);
    split_ = MakeSplit(params_.n, 12);
  }
  HsbmParams params_;
  GraphSample graph_;
  Split split_;
};

TEST_F(TrainingTest, MlpApproachesBayesOnRawFeatures) {
  const TrainResult r =
      TrainMlp(graph_.features, graph_.labels, 5, split_, TrainConfig{}, 12);
  const double bayes =
      Accuracy(Predict(BayesRaw(params_), graph_.features), graph_.labels, split_.test);
  EXPECT_NEAR(r.accuracy, bayes, 4.0);
  EXPECT_EQ(r.confusion.total(), static_cast<int64_t>(split_.test.size()));
  EXPECT_NEAR(r.accuracy, 100.0 * r.confusion.accuracy(), 1e-9);
  EXPECT_EQ(r.predictions.size(), graph_.labels.size());
}

TEST_F(TrainingTest, GcnApproachesAggregatedBayes) {
  const TrainResult r =
      TrainGcn(graph_, graph_.features, split_, TrainConfig{}, {}, 12);
  const Matrix agg = AggregateOnce(graph_, graph_.features, {});
  const double bayes =
      Accuracy(Predict(BayesAggregated(params_), agg), graph_.labels, split_.test);
  EXPECT_NEAR(r.accuracy, bayes, 4.0);
}

TEST_F(TrainingTest, DeterministicPerSeed) {
  TrainConfig cfg;
  cfg.hidden = {8};
  cfg.dropout = {0.2};
  cfg.epochs = {60};
  const TrainResult a = TrainMlp(graph_.features, graph_.labels, 5, split_, cfg, 3);
  const TrainResult b = TrainMlp(graph_.features, graph_.labels, 5, split_, cfg, 3);
  EXPECT_EQ(a.predictions, b.predictions);
  EXPECT_EQ(a.accuracy, b.accuracy);
}

TEST_F(TrainingTest, GridSelectsByValidation) {
  TrainConfig cfg;
  cfg.lr = {1e-6, 0.05};
  cfg.epochs = {100};
  const TrainResult r = TrainMlp(graph_.features, graph_.labels, 5, split_, cfg, 1);
  EXPECT_EQ(r.selected.lr, 0.05);
  const auto j = TrainResultToJson(r);
  EXPECT_EQ(j["selected_hyperparams"]["lr"], 0.05);
  EXPECT_EQ(j["confusion"].size(), 5u);
}

TEST_F(TrainingTest, SecondLayerGcnTrains) {
  TrainConfig cfg;
  cfg.hidden = {16};
  cfg.epochs = {200};
  const TrainResult r = TrainGcn(graph_, graph_.features, split_, cfg, {}, 5,
                                 GcnMode::kSecondLayer);
  EXPECT_GT(r.accuracy, 60.0);
  cfg.hidden = {0};
  EXPECT_THROW(TrainGcn(graph_, graph_.features, split_, cfg, {}, 5,
                        GcnMode::kSecondLayer),
               Error);
}

TEST_F(TrainingTest, GradientDescentOptimizer) {
  TrainConfig cfg;
  cfg.optimizer = Optimizer::kGd;
  cfg.lr = {0.5};
  cfg.epochs = {300};
  const TrainResult r =
      TrainMlp(graph_.features, graph_.labels, 5, split_, cfg, 2);
  const double bayes =
      Accuracy(Predict(BayesRaw(params_), graph_.features), graph_.labels, split_.test);
  EXPECT_NEAR(r.accuracy, bayes, 6.0);
}

}  // namespace
}  // namespace hsbm
