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

// Full-batch training of a one- or two-layer network with softmax
// cross-entropy. Small enough that plain Eigen products are the whole story.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "hsbm/classify.h"
#include "hsbm/rng.h"

namespace hsbm {
using nlohmann::json;
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

struct Param {
  Matrix value;
  Matrix grad;
  Matrix m;  // Adam first moment
  Matrix v;  // Adam second moment
  bool decay = true;

  void Init(Eigen::Index rows, Eigen::Index cols, bool weight) {
    value = Matrix::Zero(rows, cols);
    grad = m = v = value;
    decay = weight;
  }
};

void Glorot(Matrix& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  std::uniform_real_distribution<double> u(-limit, limit);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
}

// Inverted dropout; returns the scaled keep-mask.
Matrix DropoutMask(Eigen::Index rows, Eigen::Index cols, double rate,
                   Rng& rng) {
  Matrix mask(rows, cols);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = u(rng) < rate ? 0.0 : keep;
  }
  return mask;
}

// y = P z (forward) and its adjoint P^T g, with P = D^-1 A and identity rows
// for isolated nodes.
Matrix Propagate(const GraphSample& g, bool self_loops, const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  AggregateRows<double>(g, self_loops, z.data(), out.data(), z.cols());
  return out;
}

Matrix PropagateAdjoint(const GraphSample& g, bool self_loops,
                        const Matrix& grad) {
  Matrix out = Matrix::Zero(grad.rows(), grad.cols());
  for (int64_t i = 0; i < g.num_nodes(); ++i) {
    const auto nbrs = g.in_neighbors(i);
    if (nbrs.empty()) {
      out.row(i) += grad.row(i);
      continue;
    }
    const double w =
        1.0 / static_cast<double>(nbrs.size() + (self_loops ? 1 : 0));
    if (self_loops) out.row(i) += w * grad.row(i);
    for (int32_t j : nbrs) out.row(j) += w * grad.row(i);
  }
  return out;
}

class Network {
 public:
  Network(Eigen::Index in, int hidden, int classes, Rng& init_rng,
          const GraphSample* graph, bool self_loops)
      : hidden_(hidden), graph_(graph), self_loops_(self_loops) {
    if (hidden == 0) {
      w1_.Init(in, classes, true);
      b1_.Init(1, classes, false);
      Glorot(w1_.value, init_rng);
    } else {
      w1_.Init(in, hidden, true);
      b1_.Init(1, hidden, false);
      w2_.Init(hidden, classes, true);
      b2_.Init(1, classes, false);
      Glorot(w1_.value, init_rng);
      Glorot(w2_.value, init_rng);
    }
  }

  // Logits for every node. With `rng` set, dropout is applied and the
  // intermediates needed for Backward are kept.
  Matrix Forward(const Matrix& x, double dropout, Rng* rng) {
    const bool train = rng != nullptr && dropout > 0.0;
    xd_ = train ? Matrix(x.cwiseProduct(
                      DropoutMask(x.rows(), x.cols(), dropout, *rng)))
                : x;
    if (hidden_ == 0) {
      return (xd_ * w1_.value).rowwise() + b1_.value.row(0);
    }
    z1_ = (xd_ * w1_.value).rowwise() + b1_.value.row(0);
    Matrix h = z1_.cwiseMax(0.0);
    if (train) {
      mask2_ = DropoutMask(h.rows(), h.cols(), dropout, *rng);
      h = h.cwiseProduct(mask2_);
    } else {
      mask2_.resize(0, 0);
    }
    hd_ = h;
    Matrix z2 = hd_ * w2_.value;
    if (graph_ != nullptr) z2 = Propagate(*graph_, self_loops_, z2);
    return z2.rowwise() + b2_.value.row(0);
  }

  // `g` is dLoss/dLogits.
  void Backward(const Matrix& g) {
    if (hidden_ == 0) {
      w1_.grad = xd_.transpose() * g;
      b1_.grad = g.colwise().sum();
      return;
    }
    b2_.grad = g.colwise().sum();
    const Matrix gz2 =
        graph_ != nullptr ? PropagateAdjoint(*graph_, self_loops_, g) : g;
    w2_.grad = hd_.transpose() * gz2;
    Matrix gh = gz2 * w2_.value.transpose();
    if (mask2_.size() > 0) gh = gh.cwiseProduct(mask2_);
    for (Eigen::Index i = 0; i < gh.size(); ++i) {
      if (z1_.data()[i] <= 0.0) gh.data()[i] = 0.0;
    }
    w1_.grad = xd_.transpose() * gh;
    b1_.grad = gh.colwise().sum();
  }

  template <typename Fn>
  void ForEachParam(Fn&& fn) {
    fn(w1_);
    fn(b1_);
    if (hidden_ > 0) {
      fn(w2_);
      fn(b2_);
    }
  }

 private:
  int hidden_;
  const GraphSample* graph_;
  bool self_loops_;
  Param w1_, b1_, w2_, b2_;
  Matrix xd_, z1_, hd_, mask2_;
};

// Softmax cross-entropy gradient over `rows`, averaged; log-space softmax.
Matrix LossGradient(const Matrix& logits, const std::vector<int32_t>& labels,
                    const std::vector<int64_t>& rows) {
  Matrix g = Matrix::Zero(logits.rows(), logits.cols());
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (int64_t i : rows) {
    const double peak = logits.row(i).maxCoeff();
    const double lse =
        peak + std::log((logits.row(i).array() - peak).exp().sum());
    g.row(i) = (logits.row(i).array() - lse).exp().matrix() * inv;
    g(i, labels[i]) -= inv;
  }
  return g;
}

std::vector<int32_t> ArgmaxRows(const Matrix& logits) {
  std::vector<int32_t> out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    out[i] = ArgmaxLowest(logits.row(i).data(), static_cast<int>(logits.cols()));
  }
  return out;
}

double AccuracyOn(const std::vector<int32_t>& pred,
                  const std::vector<int32_t>& labels,
                  const std::vector<int64_t>& rows) {
  if (rows.empty()) return 0.0;
  int64_t hit = 0;
  for (int64_t i : rows) hit += pred[i] == labels[i];
  return 100.0 * static_cast<double>(hit) / static_cast<double>(rows.size());
}

struct RunOutcome {
  double val_accuracy = -1.0;
  std::vector<int32_t> predictions;
};

RunOutcome TrainOne(const Matrix& x, const std::vector<int32_t>& labels,
                    int num_classes, const Split& split, const HyperParams& hp,
                    const TrainConfig& cfg, uint64_t seed,
                    const GraphSample* graph, bool self_loops) {
  Rng init_rng = MakeRng(seed, Stream::kInit);
  Rng drop_rng = MakeRng(seed, Stream::kDropout);
  Network net(x.cols(), hp.hidden, num_classes, init_rng, graph, self_loops);
  RunOutcome best;
  int64_t step = 0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    const Matrix logits =
        net.Forward(x, hp.dropout, hp.dropout > 0.0 ? &drop_rng : nullptr);
    net.Backward(LossGradient(logits, labels, split.train));
    ++step;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
    net.ForEachParam([&](Param& p) {
      if (p.decay && hp.weight_decay > 0.0) p.grad += hp.weight_decay * p.value;
      if (cfg.optimizer == Optimizer::kGd) {
        p.value -= hp.lr * p.grad;
        return;
      }
      p.m = kAdamBeta1 * p.m + (1.0 - kAdamBeta1) * p.grad;
      p.v = kAdamBeta2 * p.v + (1.0 - kAdamBeta2) * p.grad.cwiseAbs2();
      p.value.array() -= hp.lr * (p.m.array() / bc1) /
                         ((p.v.array() / bc2).sqrt() + kAdamEps);
    });
    const bool last = epoch + 1 == hp.epochs;
    if ((epoch + 1) % cfg.eval_every == 0 || last) {
      std::vector<int32_t> pred = ArgmaxRows(net.Forward(x, 0.0, nullptr));
      const double val = AccuracyOn(pred, labels, split.val);
      if (val > best.val_accuracy) {
        best.val_accuracy = val;
        best.predictions = std::move(pred);
      }
    }
  }
  return best;
}

template <typename T>
std::vector<T> GridFromJson(const json& j, const char* key, std::vector<T> def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

TrainResult TrainImpl(const Matrix& x, const std::vector<int32_t>& labels,
                      int num_classes, const Split& split,
                      const TrainConfig& cfg, uint64_t seed,
                      const GraphSample* graph, bool self_loops) {
  cfg.Validate();
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw Error(ErrorCode::kShape, "feature rows do not match label count");
  }
  if (split.train.empty() || split.test.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "split needs train and test nodes");
  }
  std::optional<RunOutcome> best;
  HyperParams chosen;
  for (int hidden : cfg.hidden) {
    for (double lr : cfg.lr) {
      for (double wd : cfg.weight_decay) {
        for (double dropout : cfg.dropout) {
          for (int epochs : cfg.epochs) {
            const HyperParams hp{hidden, lr, wd, dropout, epochs};
            RunOutcome run = TrainOne(x, labels, num_classes, split, hp, cfg,
                                      seed, graph, self_loops);
            if (!best || run.val_accuracy > best->val_accuracy) {
              best = std::move(run);
              chosen = hp;
            }
          }
        }
      }
    }
  }
  TrainResult r;
  r.seed = seed;
  r.selected = chosen;
  r.val_accuracy = best->val_accuracy;
  r.predictions = std::move(best->predictions);
  r.accuracy = AccuracyOn(r.predictions, labels, split.test);
  std::vector<int64_t> all;
  if (!cfg.confusion_on_test) {
    all.resize(labels.size());
    std::iota(all.begin(), all.end(), 0);
  }
  r.confusion = Confusion(r.predictions, labels,
                          cfg.confusion_on_test ? split.test : all, num_classes);
  return r;
}

}  // namespace

Split MakeSplit(int64_t n, uint64_t seed, double train_frac, double val_frac) {
  if (n < 3 || train_frac <= 0.0 || val_frac < 0.0 ||
      train_frac + val_frac >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid split request");
  }
  std::vector<int64_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = MakeRng(seed, Stream::kSplit);
  for (int64_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int64_t> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  const auto n_train = static_cast<int64_t>(std::floor(train_frac * n));
  const auto n_val = static_cast<int64_t>(std::floor(val_frac * n));
  Split s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  s.test.assign(perm.begin() + n_train + n_val, perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

const char* OptimizerName(Optimizer opt) {
  return opt == Optimizer::kAdam ? "adam" : "gd";
}

Optimizer ParseOptimizer(const std::string& name) {
  if (name == "adam") return Optimizer::kAdam;
  if (name == "gd" || name == "sgd") return Optimizer::kGd;
  throw Error(ErrorCode::kConfig, "unknown optimizer '" + name + "'");
}

TrainConfig TrainConfig::RealWorldGrid() {
  TrainConfig cfg;
  cfg.hidden = {16, 32, 64, 128, 256};
  cfg.lr = {0.001, 0.005, 0.01};
  cfg.weight_decay = {0.0, 1e-5, 5e-4, 1e-4};
  cfg.dropout = {0.0, 0.2, 0.5};
  cfg.epochs = {500};
  cfg.optimizer = Optimizer::kAdam;
  return cfg;
}

void TrainConfig::Validate() const {
  if (hidden.empty() || lr.empty() || weight_decay.empty() || dropout.empty() ||
      epochs.empty()) {
    throw Error(ErrorCode::kConfig, "every hyperparameter grid must be nonempty");
  }
  for (int h : hidden) {
    if (h < 0) throw Error(ErrorCode::kConfig, "hidden size must be >= 0");
  }
  for (double v : lr) {
    if (!(v > 0.0)) throw Error(ErrorCode::kConfig, "learning rate must be > 0");
  }
  for (double v : weight_decay) {
    if (v < 0.0) throw Error(ErrorCode::kConfig, "weight decay must be >= 0");
  }
  for (double v : dropout) {
    if (v < 0.0 || v >= 1.0) {
      throw Error(ErrorCode::kConfig, "dropout must lie in [0, 1)");
    }
  }
  for (int e : epochs) {
    if (e < 1) throw Error(ErrorCode::kConfig, "epochs must be >= 1");
  }
  if (eval_every < 1) throw Error(ErrorCode::kConfig, "eval_every must be >= 1");
}

json TrainConfigToJson(const TrainConfig& cfg) {
  return json{{"hidden", cfg.hidden},
              {"lr", cfg.lr},
              {"weight_decay", cfg.weight_decay},
              {"dropout", cfg.dropout},
              {"epochs", cfg.epochs},
              {"optimizer", OptimizerName(cfg.optimizer)},
              {"eval_every", cfg.eval_every},
              {"confusion_on_test", cfg.confusion_on_test}};
}

TrainConfig TrainConfigFromJson(const json& j) {
  TrainConfig cfg;
  try {
    if (j.value("grid", std::string()) == "real_world") {
      cfg = TrainConfig::RealWorldGrid();
    }
    cfg.hidden = GridFromJson<int>(j, "hidden", cfg.hidden);
    cfg.lr = GridFromJson<double>(j, "lr", cfg.lr);
    cfg.weight_decay = GridFromJson<double>(j, "weight_decay", cfg.weight_decay);
    cfg.dropout = GridFromJson<double>(j, "dropout", cfg.dropout);
    cfg.epochs = GridFromJson<int>(j, "epochs", cfg.epochs);
    if (j.contains("optimizer")) {
      cfg.optimizer = ParseOptimizer(j.at("optimizer").get<std::string>());
    }
    cfg.eval_every = j.value("eval_every", cfg.eval_every);
    cfg.confusion_on_test = j.value("confusion_on_test", cfg.confusion_on_test);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad training config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

json TrainResultToJson(const TrainResult& r) {
  json confusion = json::array();
  for (int t = 0; t < r.confusion.num_classes; ++t) {
    json row = json::array();
    for (int k = 0; k < r.confusion.num_classes; ++k) {
      row.push_back(r.confusion.at(t, k));
    }
    confusion.push_back(row);
  }
  return json{{"accuracy", r.accuracy},
              {"val_accuracy", r.val_accuracy},
              {"confusion", confusion},
              {"selected_hyperparams",
               {{"hidden", r.selected.hidden},
                {"lr", r.selected.lr},
                {"weight_decay", r.selected.weight_decay},
                {"dropout", r.selected.dropout},
                {"epochs", r.selected.epochs}}},
              {"seed", r.seed}};
}

TrainResult TrainMlp(const Matrix& features, const std::vector<int32_t>& labels,
                     int num_classes, const Split& split,
                     const TrainConfig& cfg, uint64_t seed) {
  return TrainImpl(features, labels, num_classes, split, cfg, seed, nullptr,
                   false);
}

TrainResult TrainGcn(const GraphSample& graph, const Matrix& features,
                     const Split& split, const TrainConfig& cfg,
                     const AggregationConfig& agg, uint64_t seed,
                     GcnMode mode) {
  if (mode == GcnMode::kPreAggregate) {
    return TrainMlp(AggregateL(graph, features, agg), graph.labels,
                    graph.num_classes, split, cfg, seed);
  }
  for (int h : cfg.hidden) {
    if (h == 0) {
      throw Error(ErrorCode::kConfig,
                  "second-layer convolution needs a hidden layer");
    }
  }
  if (features.rows() != graph.num_nodes()) {
    throw Error(ErrorCode::kShape, "feature rows do not match node count");
  }
  return TrainImpl(features, graph.labels, graph.num_classes, split, cfg, seed,
                   &graph, agg.self_loops);
}

}  // namespace hsbm
