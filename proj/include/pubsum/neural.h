// Copyright 2026 The PubSum Authors.
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

#ifndef PUBSUM_NEURAL_H_
#define PUBSUM_NEURAL_H_

// Small differentiable toolkit: dense layers, ReLU, dropout, softmax
// cross-entropy and LSTMs, each with a hand-written backward pass, plus the
// optimizers and the early-stopping training loop. Everything is templated
// on the scalar type; models use double.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "pubsum/error.h"
#include "pubsum/random.h"

namespace pubsum::nn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline std::string ShapeString(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

template <typename Scalar>
struct Parameter {
  std::string name;
  Matrix<Scalar> value;
  Matrix<Scalar> grad;
};

// Owns named parameters. Addresses stay valid when the store is moved.
template <typename Scalar>
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(ParameterStore&&) noexcept = default;
  ParameterStore& operator=(ParameterStore&&) noexcept = default;

  Parameter<Scalar>* Add(std::string name, Eigen::Index rows, Eigen::Index cols) {
    if (Find(name)) throw Error("duplicate parameter '" + name + "'");
    auto p = std::make_unique<Parameter<Scalar>>();
    p->name = std::move(name);
    p->value = Matrix<Scalar>::Zero(rows, cols);
    p->grad = Matrix<Scalar>::Zero(rows, cols);
    params_.push_back(std::move(p));
    return params_.back().get();
  }

  Parameter<Scalar>* Find(const std::string& name) const {
    for (const auto& p : params_)
      if (p->name == name) return p.get();
    return nullptr;
  }

  void ZeroGrad() {
    for (auto& p : params_) p->grad.setZero();
  }

  size_t size() const { return params_.size(); }
  Parameter<Scalar>& operator[](size_t i) { return *params_[i]; }
  const Parameter<Scalar>& operator[](size_t i) const { return *params_[i]; }

  std::vector<Matrix<Scalar>> Snapshot() const {
    std::vector<Matrix<Scalar>> out;
    for (const auto& p : params_) out.push_back(p->value);
    return out;
  }
  void Restore(const std::vector<Matrix<Scalar>>& values) {
    for (size_t i = 0; i < params_.size(); ++i) params_[i]->value = values.at(i);
  }

 private:
  std::vector<std::unique_ptr<Parameter<Scalar>>> params_;
};

template <typename Scalar>
void FillUniform(Matrix<Scalar>& m, Scalar bound, Rng& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      m(i, j) = static_cast<Scalar>((2.0 * UniformUnit(rng) - 1.0) * bound);
}

// --- dense -------------------------------------------------------------------

// y = W x + b with W out x in.
template <typename Scalar>
class Dense {
 public:
  Dense() = default;
  Dense(ParameterStore<Scalar>& store, const std::string& name, int in, int out)
      : weights_(store.Add(name + ".weight", out, in)), bias_(store.Add(name + ".bias", out, 1)) {}

  // He-uniform weights, zero bias.
  void Initialize(Rng& rng) {
    FillUniform<Scalar>(weights_->value, std::sqrt(Scalar(6) / in()), rng);
    bias_->value.setZero();
  }

  int in() const { return static_cast<int>(weights_->value.cols()); }
  int out() const { return static_cast<int>(weights_->value.rows()); }
  Parameter<Scalar>& weights() { return *weights_; }
  Parameter<Scalar>& bias() { return *bias_; }

  Vector<Scalar> Forward(const Vector<Scalar>& x) const {
    if (x.size() != in())
      throw Error("dense_forward: weights " + ShapeString(out(), in()) + " vs input " +
                  ShapeString(x.size(), 1));
    return weights_->value * x + bias_->value.col(0);
  }

  // Accumulates dW and db; returns dL/dx.
  Vector<Scalar> Backward(const Vector<Scalar>& x, const Vector<Scalar>& dy) {
    if (x.size() != in() || dy.size() != out())
      throw Error("dense_backward: weights " + ShapeString(out(), in()) + " vs input " +
                  ShapeString(x.size(), 1) + " and gradient " + ShapeString(dy.size(), 1));
    weights_->grad.noalias() += dy * x.transpose();
    bias_->grad.col(0) += dy;
    return weights_->value.transpose() * dy;
  }

 private:
  Parameter<Scalar>* weights_ = nullptr;
  Parameter<Scalar>* bias_ = nullptr;
};

// --- activations -------------------------------------------------------------

template <typename Scalar>
Vector<Scalar> ReluForward(const Vector<Scalar>& x) {
  return x.cwiseMax(Scalar(0));
}

// `x` is the pre-activation input.
template <typename Scalar>
Vector<Scalar> ReluBackward(const Vector<Scalar>& x, const Vector<Scalar>& dy) {
  if (x.size() != dy.size())
    throw Error("relu_backward: input " + ShapeString(x.size(), 1) + " vs gradient " +
                ShapeString(dy.size(), 1));
  return (x.array() > Scalar(0)).select(dy, Scalar(0));
}

template <typename Scalar>
Scalar Sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

// Inverted dropout: kept units are scaled by 1/keep at training time, so
// evaluation needs no rescaling. An empty mask means evaluation mode.
template <typename Scalar>
struct DropoutMask {
  Vector<Scalar> scale;

  static DropoutMask Sample(Eigen::Index n, double drop_probability, Rng& rng) {
    if (!(drop_probability >= 0.0 && drop_probability < 1.0))
      throw Error("dropout: probability must be in [0, 1)");
    DropoutMask m;
    m.scale.resize(n);
    const Scalar keep_scale = Scalar(1.0 / (1.0 - drop_probability));
    for (Eigen::Index i = 0; i < n; ++i)
      m.scale[i] = UniformUnit(rng) < drop_probability ? Scalar(0) : keep_scale;
    return m;
  }

  bool active() const { return scale.size() > 0; }

  Vector<Scalar> Apply(const Vector<Scalar>& x) const {
    if (!active()) return x;
    if (x.size() != scale.size())
      throw Error("dropout: mask " + ShapeString(scale.size(), 1) + " vs input " +
                  ShapeString(x.size(), 1));
    return x.cwiseProduct(scale);
  }
  Vector<Scalar> Backward(const Vector<Scalar>& dy) const { return Apply(dy); }
};

template <typename Scalar>
struct SoftmaxLoss {
  Scalar loss;
  Vector<Scalar> probabilities;
  Vector<Scalar> grad;  // dL/dlogits
};

template <typename Scalar>
Vector<Scalar> Softmax(const Vector<Scalar>& logits) {
  const Scalar peak = logits.maxCoeff();
  Vector<Scalar> e = (logits.array() - peak).exp().matrix();
  return e / e.sum();
}

template <typename Scalar>
SoftmaxLoss<Scalar> SoftmaxCrossEntropy(const Vector<Scalar>& logits, int label) {
  if (label < 0 || label >= logits.size())
    throw Error("softmax_cross_entropy: label " + std::to_string(label) + " outside " +
                std::to_string(logits.size()) + " classes");
  const Scalar peak = logits.maxCoeff();
  const Scalar log_norm = peak + std::log((logits.array() - peak).exp().sum());
  SoftmaxLoss<Scalar> out;
  out.loss = log_norm - logits[label];
  out.probabilities = (logits.array() - log_norm).exp().matrix();
  out.grad = out.probabilities;
  out.grad[label] -= Scalar(1);
  return out;
}

// --- LSTM --------------------------------------------------------------------

// Standard LSTM without peepholes. Gate rows are stacked as input, forget,
// candidate, output.
template <typename Scalar>
class Lstm {
 public:
  struct Cache {
    Matrix<Scalar> inputs;      // in x T
    Matrix<Scalar> gates;       // 4H x T, post-activation
    Matrix<Scalar> cells;       // H x (T+1), column 0 is the initial state
    Matrix<Scalar> hiddens;     // H x (T+1)
  };

  Lstm() = default;
  Lstm(ParameterStore<Scalar>& store, const std::string& name, int in, int hidden)
      : input_weights_(store.Add(name + ".wx", 4 * hidden, in)),
        recurrent_weights_(store.Add(name + ".wh", 4 * hidden, hidden)),
        bias_(store.Add(name + ".bias", 4 * hidden, 1)) {}

  // U(-1/sqrt(H), 1/sqrt(H)) weights, zero bias except forget gate at 1.
  void Initialize(Rng& rng) {
    const Scalar bound = Scalar(1) / std::sqrt(Scalar(hidden()));
    FillUniform<Scalar>(input_weights_->value, bound, rng);
    FillUniform<Scalar>(recurrent_weights_->value, bound, rng);
    bias_->value.setZero();
    bias_->value.block(hidden(), 0, hidden(), 1).setOnes();
  }

  int in() const { return static_cast<int>(input_weights_->value.cols()); }
  int hidden() const { return static_cast<int>(recurrent_weights_->value.cols()); }

  // Returns the final hidden state. `cache` may be null at inference.
  Vector<Scalar> Forward(const Matrix<Scalar>& inputs, Cache* cache) const {
    if (inputs.cols() == 0) throw Error("lstm_forward: empty sequence");
    if (inputs.rows() != in())
      throw Error("lstm_forward: input weights " + ShapeString(4 * hidden(), in()) +
                  " vs sequence " + ShapeString(inputs.rows(), inputs.cols()));
    const int h = hidden();
    const Eigen::Index steps = inputs.cols();
    Matrix<Scalar> pre = input_weights_->value * inputs;
    pre.colwise() += bias_->value.col(0);
    Cache local;
    Cache& c = cache ? *cache : local;
    c.inputs = inputs;
    c.gates.resize(4 * h, steps);
    c.cells = Matrix<Scalar>::Zero(h, steps + 1);
    c.hiddens = Matrix<Scalar>::Zero(h, steps + 1);
    for (Eigen::Index t = 0; t < steps; ++t) {
      Vector<Scalar> z = pre.col(t);
      z.noalias() += recurrent_weights_->value * c.hiddens.col(t);
      auto gate = c.gates.col(t);
      for (int k = 0; k < h; ++k) {
        gate[k] = Sigmoid(z[k]);
        gate[h + k] = Sigmoid(z[h + k]);
        gate[2 * h + k] = std::tanh(z[2 * h + k]);
        gate[3 * h + k] = Sigmoid(z[3 * h + k]);
      }
      c.cells.col(t + 1) = gate.segment(h, h).cwiseProduct(c.cells.col(t)) +
                           gate.segment(0, h).cwiseProduct(gate.segment(2 * h, h));
      c.hiddens.col(t + 1) =
          gate.segment(3 * h, h).cwiseProduct(c.cells.col(t + 1).array().tanh().matrix());
    }
    return c.hiddens.col(steps);
  }

  // Back-propagates dL/dh_T through time; accumulates parameter gradients and
  // returns dL/dinputs (in x T).
  Matrix<Scalar> Backward(const Cache& c, const Vector<Scalar>& d_final) {
    const int h = hidden();
    if (d_final.size() != h)
      throw Error("lstm_backward: hidden " + std::to_string(h) + " vs gradient " +
                  ShapeString(d_final.size(), 1));
    const Eigen::Index steps = c.inputs.cols();
    Matrix<Scalar> d_pre(4 * h, steps);
    Vector<Scalar> dh = d_final;
    Vector<Scalar> dc = Vector<Scalar>::Zero(h);
    for (Eigen::Index t = steps - 1; t >= 0; --t) {
      const auto gate = c.gates.col(t);
      const auto i = gate.segment(0, h).array();
      const auto f = gate.segment(h, h).array();
      const auto g = gate.segment(2 * h, h).array();
      const auto o = gate.segment(3 * h, h).array();
      const Eigen::Array<Scalar, Eigen::Dynamic, 1> tanh_c = c.cells.col(t + 1).array().tanh();
      dc.array() += dh.array() * o * (Scalar(1) - tanh_c.square());
      d_pre.col(t).segment(0, h) = (dc.array() * g * i * (Scalar(1) - i)).matrix();
      d_pre.col(t).segment(h, h) =
          (dc.array() * c.cells.col(t).array() * f * (Scalar(1) - f)).matrix();
      d_pre.col(t).segment(2 * h, h) = (dc.array() * i * (Scalar(1) - g.square())).matrix();
      d_pre.col(t).segment(3 * h, h) = (dh.array() * tanh_c * o * (Scalar(1) - o)).matrix();
      dc = (dc.array() * f).matrix();
      dh = recurrent_weights_->value.transpose() * d_pre.col(t);
    }
    input_weights_->grad.noalias() += d_pre * c.inputs.transpose();
    recurrent_weights_->grad.noalias() += d_pre * c.hiddens.leftCols(steps).transpose();
    bias_->grad.col(0) += d_pre.rowwise().sum();
    return input_weights_->value.transpose() * d_pre;
  }

 private:
  Parameter<Scalar>* input_weights_ = nullptr;
  Parameter<Scalar>* recurrent_weights_ = nullptr;
  Parameter<Scalar>* bias_ = nullptr;
};

// Forward LSTM over the sequence and backward LSTM over its reverse; the two
// final hidden states are concatenated.
template <typename Scalar>
class BiLstm {
 public:
  struct Cache {
    typename Lstm<Scalar>::Cache forward, backward;
  };

  BiLstm() = default;
  BiLstm(ParameterStore<Scalar>& store, const std::string& name, int in, int hidden)
      : forward_(store, name + ".fwd", in, hidden), backward_(store, name + ".bwd", in, hidden) {}

  void Initialize(Rng& rng) {
    forward_.Initialize(rng);
    backward_.Initialize(rng);
  }

  int in() const { return forward_.in(); }
  int out() const { return 2 * forward_.hidden(); }

  Vector<Scalar> Forward(const Matrix<Scalar>& inputs, Cache* cache) const {
    if (inputs.cols() == 0) throw Error("bilstm_encode: empty sequence");
    const int h = forward_.hidden();
    Vector<Scalar> out(2 * h);
    out.head(h) = forward_.Forward(inputs, cache ? &cache->forward : nullptr);
    out.tail(h) = backward_.Forward(inputs.rowwise().reverse(), cache ? &cache->backward : nullptr);
    return out;
  }

  Matrix<Scalar> Backward(const Cache& cache, const Vector<Scalar>& d_out) {
    const int h = forward_.hidden();
    if (d_out.size() != 2 * h)
      throw Error("bilstm_backward: expected gradient of size " + std::to_string(2 * h));
    Matrix<Scalar> dx = forward_.Backward(cache.forward, d_out.head(h));
    dx += backward_.Backward(cache.backward, d_out.tail(h)).rowwise().reverse();
    return dx;
  }

 private:
  Lstm<Scalar> forward_;
  Lstm<Scalar> backward_;
};

// --- optimizers --------------------------------------------------------------

enum class OptimizerKind { kAdam, kSgd };

// Applies one update using grad * grad_scale (e.g. 1 / batch size).
template <typename Scalar>
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate) : kind_(kind), lr_(learning_rate) {}

  void Step(ParameterStore<Scalar>& store, Scalar grad_scale) {
    if (kind_ == OptimizerKind::kSgd) {
      for (size_t i = 0; i < store.size(); ++i)
        store[i].value -= Scalar(lr_) * grad_scale * store[i].grad;
      return;
    }
    if (first_.size() != store.size()) {
      first_.clear();
      second_.clear();
      for (size_t i = 0; i < store.size(); ++i) {
        first_.push_back(Matrix<Scalar>::Zero(store[i].value.rows(), store[i].value.cols()));
        second_.push_back(first_.back());
      }
    }
    ++step_;
    const double c1 = 1.0 - std::pow(kBeta1, step_);
    const double c2 = 1.0 - std::pow(kBeta2, step_);
    for (size_t i = 0; i < store.size(); ++i) {
      const Matrix<Scalar> g = grad_scale * store[i].grad;
      first_[i] = Scalar(kBeta1) * first_[i] + Scalar(1 - kBeta1) * g;
      second_[i] = Scalar(kBeta2) * second_[i] + Scalar(1 - kBeta2) * g.cwiseAbs2();
      store[i].value.array() -=
          Scalar(lr_) * (first_[i].array() / Scalar(c1)) /
          ((second_[i].array() / Scalar(c2)).sqrt() + Scalar(kEpsilon));
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  OptimizerKind kind_;
  double lr_;
  int step_ = 0;
  std::vector<Matrix<Scalar>> first_, second_;
};

// --- training loop -----------------------------------------------------------

struct TrainConfig {
  double dropout = 0.5;  // drop probability at training time
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  int batch_size = 64;
  int max_epochs = 30;
  // Stop after this many epochs without a dev-loss improvement.
  int patience = 3;
  double dev_fraction = 0.05;
  uint64_t seed = 0;
};

struct TrainResult {
  std::vector<double> train_loss;  // mean per epoch
  std::vector<double> dev_loss;
  int best_epoch = -1;
  double best_dev_loss = std::numeric_limits<double>::infinity();
};

// Indices of a seeded dev hold-out (at least one item when n > 1).
inline std::vector<size_t> DevIndices(size_t n, double fraction, uint64_t seed) {
  if (n < 2 || fraction <= 0.0) return {};
  size_t k = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
  k = std::clamp<size_t>(k, 1, n - 1);
  Rng rng = MakeRng(seed, 0xdeu);
  auto idx = SampleWithoutReplacement(n, k, rng);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Mini-batch training with early stopping on dev loss. `accumulate(i, rng)`
// adds the gradient of example i's loss (dropout drawn from rng) and returns
// the loss; `evaluate(i)` returns the evaluation-mode loss of dev example i.
// The parameters with the best dev loss are restored before returning.
template <typename Scalar>
TrainResult Train(ParameterStore<Scalar>& params, size_t num_train,
                  const std::function<double(size_t, Rng&)>& accumulate, size_t num_dev,
                  const std::function<double(size_t)>& evaluate, const TrainConfig& cfg) {
  if (cfg.batch_size <= 0 || cfg.max_epochs <= 0 || cfg.patience <= 0 || cfg.learning_rate < 0)
    throw Error("train: invalid configuration");
  if (num_train == 0) throw Error("train: no training examples");
  Optimizer<Scalar> optimizer(cfg.optimizer, cfg.learning_rate);
  Rng rng = MakeRng(cfg.seed, 0x7a11ULL);
  std::vector<size_t> order(num_train);
  std::iota(order.begin(), order.end(), size_t{0});
  TrainResult result;
  auto best = params.Snapshot();
  int stale = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    Shuffle(order, rng);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < num_train; start += cfg.batch_size) {
      const size_t end = std::min(num_train, start + static_cast<size_t>(cfg.batch_size));
      params.ZeroGrad();
      double batch_loss = 0.0;
      for (size_t j = start; j < end; ++j) batch_loss += accumulate(order[j], rng);
      if (!std::isfinite(batch_loss))
        throw Error("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(start / cfg.batch_size));
      epoch_loss += batch_loss;
      optimizer.Step(params, Scalar(1.0 / static_cast<double>(end - start)));
    }
    result.train_loss.push_back(epoch_loss / static_cast<double>(num_train));

    double dev = 0.0;
    if (num_dev > 0) {
      for (size_t j = 0; j < num_dev; ++j) dev += evaluate(j);
      dev /= static_cast<double>(num_dev);
    } else {
      dev = result.train_loss.back();
    }
    if (!std::isfinite(dev))
      throw Error("train: non-finite dev loss at epoch " + std::to_string(epoch));
    result.dev_loss.push_back(dev);
    if (dev < result.best_dev_loss) {
      result.best_dev_loss = dev;
      result.best_epoch = epoch;
      best = params.Snapshot();
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  params.Restore(best);
  return result;
}

}  // namespace pubsum::nn

#endif  // PUBSUM_NEURAL_H_
