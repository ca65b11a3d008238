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

#include "pubsum/neural.h"

#include <cmath>
#include <functional>

#include "doctest.h"

namespace pubsum::nn {
namespace {

using Mat = Matrix<double>;
using Vec = Vector<double>;

Mat RandomMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat m(rows, cols);
  FillUniform<double>(m, 1.0, rng);
  return m;
}

// Central differences against the analytic gradient already stored in `params`.
double MaxRelativeError(ParameterStore<double>& params, const std::function<double()>& loss) {
  const double eps = 1e-4;
  double worst = 0.0;
  for (size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      const double saved = p.value(k);
      p.value(k) = saved + eps;
      const double up = loss();
      p.value(k) = saved - eps;
      const double down = loss();
      p.value(k) = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = p.grad(k);
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-3});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
  }
  return worst;
}

double MaxInputError(Mat& x, const Mat& dx, const std::function<double()>& loss) {
  const double eps = 1e-4;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double saved = x(k);
    x(k) = saved + eps;
    const double up = loss();
    x(k) = saved - eps;
    const double down = loss();
    x(k) = saved;
    const double numeric = (up - down) / (2 * eps);
    const double scale = std::max({std::abs(numeric), std::abs(dx(k)), 1e-3});
    worst = std::max(worst, std::abs(numeric - dx(k)) / scale);
  }
  return worst;
}

TEST_CASE("dense forward and backward") {
  ParameterStore<double> store;
  Dense<double> layer(store, "d", 3, 2);
  layer.weights().value << 1, 2, 3,
                           4, 5, 6;
  layer.bias().value << 0.5, -0.5;
  Vec x(3);
  x << 1, 0, -1;
  Vec y = layer.Forward(x);
  CHECK(y(0) == doctest::Approx(-1.5));
  CHECK(y(1) == doctest::Approx(-2.5));
  Vec dy(2);
  dy << 1, 2;
  Vec dx = layer.Backward(x, dy);
  CHECK(dx(0) == doctest::Approx(9));
  CHECK(dx(1) == doctest::Approx(12));
  CHECK(dx(2) == doctest::Approx(15));
  CHECK(layer.weights().grad(1, 0) == doctest::Approx(2));
  CHECK(layer.bias().grad(1) == doctest::Approx(2));
  CHECK_THROWS_AS(layer.Forward(Vec::Zero(4)), Error);
}

TEST_CASE("dense, relu and softmax gradients") {
  Rng rng = MakeRng(3, 0);
  ParameterStore<double> store;
  Dense<double> a(store, "a", 5, 4), b(store, "b", 4, 3);
  a.Initialize(rng);
  b.Initialize(rng);
  store[1].value = RandomMatrix(4, 1, rng);
  Mat x = RandomMatrix(5, 1, rng);
  const int label = 2;
  auto loss = [&] {
    Vec h = a.Forward(x.col(0));
    return SoftmaxCrossEntropy<double>(b.Forward(ReluForward<double>(h)), label).loss;
  };
  store.ZeroGrad();
  Vec h = a.Forward(x.col(0));
  Vec r = ReluForward<double>(h);
  auto out = SoftmaxCrossEntropy<double>(b.Forward(r), label);
  Mat dx = a.Backward(x.col(0), ReluBackward<double>(h, b.Backward(r, out.grad)));
  CHECK(MaxRelativeError(store, loss) < 1e-4);
  CHECK(MaxInputError(x, dx, loss) < 1e-4);
}

TEST_CASE("softmax cross entropy") {
  Vec logits(3);
  logits << 1, 2, 3;
  auto out = SoftmaxCrossEntropy<double>(logits, 0);
  double z = std::exp(1) + std::exp(2) + std::exp(3);
  CHECK(out.loss == doctest::Approx(std::log(z) - 1));
  CHECK(out.probabilities.sum() == doctest::Approx(1));
  CHECK(out.grad(0) == doctest::Approx(std::exp(1) / z - 1));
  CHECK(Softmax<double>(logits).isApprox(out.probabilities));
  Vec big(2);
  big << 1000, 0;
  auto stable = SoftmaxCrossEntropy<double>(big, 1);
  CHECK(std::isfinite(stable.loss));
  CHECK(stable.loss == doctest::Approx(1000));
  CHECK_THROWS_AS(SoftmaxCrossEntropy<double>(logits, 3), Error);
}

TEST_CASE("lstm gradients") {
  Rng rng = MakeRng(5, 0);
  ParameterStore<double> store;
  Lstm<double> lstm(store, "l", 3, 4);
  lstm.Initialize(rng);
  store[2].value = RandomMatrix(16, 1, rng);
  Mat x = RandomMatrix(3, 6, rng);
  Mat w = RandomMatrix(4, 1, rng);
  auto loss = [&] { return lstm.Forward(x, nullptr).dot(w.col(0)); };
  store.ZeroGrad();
  Lstm<double>::Cache cache;
  lstm.Forward(x, &cache);
  Mat dx = lstm.Backward(cache, w.col(0));
  CHECK(MaxRelativeError(store, loss) < 1e-4);
  CHECK(MaxInputError(x, dx, loss) < 1e-4);
  CHECK_THROWS_AS(lstm.Forward(Mat(3, 0), nullptr), Error);
  CHECK_THROWS_AS(lstm.Forward(Mat::Zero(2, 2), nullptr), Error);
}

TEST_CASE("lstm initial forget bias and single step") {
  ParameterStore<double> store;
  Lstm<double> lstm(store, "l", 1, 1);
  Rng rng = MakeRng(1, 0);
  lstm.Initialize(rng);
  CHECK(store[2].value(1) == 1.0);
  CHECK(store[2].value(0) == 0.0);
  // Zero weights: i = f = o = 1/2, g = 0, so c and h stay zero.
  store[0].value.setZero();
  store[1].value.setZero();
  Mat x = Mat::Ones(1, 3);
  CHECK(lstm.Forward(x, nullptr)(0) == 0.0);
  store[2].value << 0, 0, 10, 0;  // g = tanh(10)
  double c = 0.5 * std::tanh(10.0);
  CHECK(lstm.Forward(Mat::Ones(1, 1), nullptr)(0) == doctest::Approx(0.5 * std::tanh(c)));
}

TEST_CASE("bilstm gradients") {
  Rng rng = MakeRng(6, 0);
  ParameterStore<double> store;
  BiLstm<double> bi(store, "b", 3, 2);
  bi.Initialize(rng);
  Mat x = RandomMatrix(3, 5, rng);
  Mat w = RandomMatrix(4, 1, rng);
  auto loss = [&] { return bi.Forward(x, nullptr).dot(w.col(0)); };
  store.ZeroGrad();
  BiLstm<double>::Cache cache;
  bi.Forward(x, &cache);
  Mat dx = bi.Backward(cache, w.col(0));
  CHECK(MaxRelativeError(store, loss) < 1e-4);
  CHECK(MaxInputError(x, dx, loss) < 1e-4);
}

TEST_CASE("bilstm backward half reads the sequence reversed") {
  Rng rng = MakeRng(8, 0);
  ParameterStore<double> store;
  BiLstm<double> bi(store, "b", 2, 3);
  bi.Initialize(rng);
  Mat x = RandomMatrix(2, 4, rng);
  Vec fwd = bi.Forward(x, nullptr);
  Vec rev = bi.Forward(x.rowwise().reverse(), nullptr);
  // Swapping the two directions' weights on the reversed sequence swaps the halves.
  ParameterStore<double> swapped;
  BiLstm<double> other(swapped, "b", 2, 3);
  for (size_t i = 0; i < 3; ++i) {
    swapped[i].value = store[i + 3].value;
    swapped[i + 3].value = store[i].value;
  }
  Vec o = other.Forward(x.rowwise().reverse(), nullptr);
  CHECK(o.head(3).isApprox(fwd.tail(3)));
  CHECK(o.tail(3).isApprox(fwd.head(3)));
  CHECK(!rev.isApprox(fwd));
}

TEST_CASE("dropout") {
  Rng rng = MakeRng(9, 0);
  auto m = DropoutMask<double>::Sample(10000, 0.5, rng);
  int zeros = 0;
  for (Eigen::Index i = 0; i < m.scale.size(); ++i) {
    if (m.scale[i] == 0) ++zeros;
    else CHECK(m.scale[i] == 2.0);
  }
  CHECK(zeros > 4700);
  CHECK(zeros < 5300);
  Vec x = Vec::Ones(3);
  CHECK(DropoutMask<double>{}.Apply(x) == x);
  auto none = DropoutMask<double>::Sample(3, 0.0, rng);
  CHECK(none.Apply(x) == x);
  CHECK_THROWS_AS(DropoutMask<double>::Sample(3, 1.0, rng), Error);
}

TEST_CASE("optimizer steps") {
  ParameterStore<double> store;
  auto* p = store.Add("p", 2, 1);
  p->value << 1, 1;
  p->grad << 4, -0.5;
  Optimizer<double> sgd(OptimizerKind::kSgd, 0.1);
  sgd.Step(store, 0.5);
  CHECK(p->value(0) == doctest::Approx(1 - 0.1 * 0.5 * 4));
  CHECK(p->value(1) == doctest::Approx(1 + 0.1 * 0.5 * 0.5));

  p->value << 1, 1;
  Optimizer<double> adam(OptimizerKind::kAdam, 0.01);
  adam.Step(store, 1.0);
  // First bias-corrected step moves each coordinate by lr against the gradient sign.
  CHECK(p->value(0) == doctest::Approx(0.99).epsilon(1e-6));
  CHECK(p->value(1) == doctest::Approx(1.01).epsilon(1e-6));
  // Second step, same gradient: m/c1 = g and v/c2 = g^2 again.
  adam.Step(store, 1.0);
  CHECK(p->value(0) == doctest::Approx(0.98).epsilon(1e-6));
}

TEST_CASE("adam minimises a quadratic") {
  ParameterStore<double> store;
  auto* p = store.Add("p", 3, 1);
  p->value << 5, -3, 2;
  Optimizer<double> adam(OptimizerKind::kAdam, 0.05);
  for (int i = 0; i < 2000; ++i) {
    p->grad = 2 * p->value;
    adam.Step(store, 1.0);
  }
  CHECK(p->value.norm() < 1e-2);
}

TEST_CASE("trainer keeps the best epoch and stops early") {
  ParameterStore<double> store;
  auto* p = store.Add("p", 1, 1);
  std::vector<double> dev{5, 4, 3, 3.5, 3.6, 3.7, 1, 1};
  int epoch = -1;
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::kSgd;
  cfg.learning_rate = 1.0;
  cfg.batch_size = 1;
  cfg.max_epochs = 8;
  cfg.patience = 3;
  auto accumulate = [&](size_t, Rng&) {
    p->grad(0) += 1.0;
    return 1.0;
  };
  auto evaluate = [&](size_t) {
    if (++epoch >= static_cast<int>(dev.size())) epoch = static_cast<int>(dev.size()) - 1;
    return dev[epoch];
  };
  auto r = Train<double>(store, 1, accumulate, 1, evaluate, cfg);
  CHECK(r.best_epoch == 2);
  CHECK(r.dev_loss.size() == 6);
  CHECK(r.best_dev_loss == 3.0);
  CHECK(p->value(0) == -3.0);
  CHECK(r.train_loss.size() == 6);
}

TEST_CASE("trainer rejects bad input") {
  ParameterStore<double> store;
  store.Add("p", 1, 1);
  TrainConfig cfg;
  auto acc = [](size_t, Rng&) { return 0.0; };
  auto ev = [](size_t) { return 0.0; };
  CHECK_THROWS_AS(Train<double>(store, 0, acc, 0, ev, cfg), Error);
  cfg.batch_size = 0;
  CHECK_THROWS_AS(Train<double>(store, 1, acc, 0, ev, cfg), Error);
  cfg.batch_size = 1;
  auto nan = [](size_t, Rng&) { return std::nan(""); };
  CHECK_THROWS_AS(Train<double>(store, 1, nan, 0, ev, cfg), Error);
  CHECK_THROWS_AS(store.Add("p", 1, 1), Error);
}

TEST_CASE("dev split") {
  CHECK(DevIndices(1, 0.5, 1).empty());
  CHECK(DevIndices(100, 0.0, 1).empty());
  auto d = DevIndices(100, 0.05, 1);
  CHECK(d.size() == 5);
  CHECK(std::is_sorted(d.begin(), d.end()));
  CHECK(DevIndices(100, 0.05, 1) == d);
  CHECK(DevIndices(3, 0.01, 1).size() == 1);
  CHECK(DevIndices(3, 0.99, 1).size() == 2);
}

}  // namespace
}  // namespace pubsum::nn
