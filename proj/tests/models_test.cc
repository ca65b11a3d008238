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

#include "pubsum/models.h"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pubsum/dataset.h"
#include "pubsum/fixtures.h"

namespace pubsum {
namespace {

ModelDims TinyDims() {
  ModelDims d;
  d.embedding = 3;
  d.lstm_hidden = 2;
  d.hidden = 4;
  return d;
}

ModelInput RandomInput(const ModelDims& d, Rng& rng, int length = 4) {
  auto vec = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = 2 * UniformUnit(rng) - 1;
    return v;
  };
  ModelInput in;
  Eigen::MatrixXd seq(d.embedding, length);
  for (int t = 0; t < length; ++t) seq.col(t) = vec(d.embedding);
  in.sequence = seq;
  in.abstract = vec(d.embedding);
  in.features = vec(d.features);
  in.sentence_vector = vec(d.embedding);
  return in;
}

TEST_CASE("architecture names") {
  for (Architecture a : kAllArchitectures) CHECK(ParseArchitecture(ArchitectureName(a)) == a);
  CHECK(ParseArchitecture("fnet") == Architecture::kFNet);
  CHECK(ParseArchitecture("safnet") == Architecture::kSAFNet);
  CHECK(!ParseArchitecture("cnn"));
  CHECK(NeedsOf(Architecture::kFNet).features);
  CHECK(!NeedsOf(Architecture::kFNet).sequence);
  CHECK(NeedsOf(Architecture::kSAFNet).abstract);
  CHECK(NeedsOf(Architecture::kSAFNet).sequence);
  CHECK(!NeedsOf(Architecture::kSNet).features);
  CHECK(NeedsOf(Architecture::kWord2VecAF).sentence_vector);
}

TEST_CASE("whole-model gradients match finite differences") {
  for (Architecture arch : kAllArchitectures) {
    CAPTURE(ArchitectureName(arch));
    Rng rng = MakeRng(11, static_cast<uint64_t>(arch));
    Summariser model(arch, TinyDims(), 4);
    // Non-zero biases so no parameter sits at a trivial point.
    for (size_t i = 0; i < model.params().size(); ++i)
      for (Eigen::Index k = 0; k < model.params()[i].value.size(); ++k)
        model.params()[i].value(k) += 0.1 * (2 * UniformUnit(rng) - 1);
    ModelInput input = RandomInput(model.dims(), rng);
    for (int label : {0, 1}) {
      model.params().ZeroGrad();
      model.AccumulateGradient(input, label);
      const double eps = 1e-4;
      double worst = 0;
      for (size_t i = 0; i < model.params().size(); ++i) {
        auto& p = model.params()[i];
        for (Eigen::Index k = 0; k < p.value.size(); ++k) {
          const double saved = p.value(k);
          p.value(k) = saved + eps;
          const double up = model.Loss(input, label);
          p.value(k) = saved - eps;
          const double down = model.Loss(input, label);
          p.value(k) = saved;
          const double numeric = (up - down) / (2 * eps);
          const double scale = std::max({std::abs(numeric), std::abs(p.grad(k)), 1e-3});
          worst = std::max(worst, std::abs(numeric - p.grad(k)) / scale);
        }
      }
      CHECK(worst < 1e-4);
    }
  }
}

TEST_CASE("probabilities and missing inputs") {
  Rng rng = MakeRng(2, 0);
  for (Architecture arch : kAllArchitectures) {
    Summariser model(arch, TinyDims(), 1);
    ModelInput input = RandomInput(model.dims(), rng);
    double p = model.Probability(input);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(model.Loss(input, 1) == doctest::Approx(-std::log(p)));
    ModelInput empty;
    CHECK_THROWS_AS(model.Probability(empty), Error);
  }
  Summariser s(Architecture::kSNet, TinyDims(), 1);
  ModelInput in = RandomInput(s.dims(), rng);
  in.sequence = Eigen::MatrixXd(3, 0);
  CHECK_THROWS_AS(s.Probability(in), Error);
  CHECK_THROWS_AS(Summariser(Architecture::kFNet, ModelDims{0, 1, 1, kNumFeatures}), Error);
}

TEST_CASE("checkpoint round trip predicts identically") {
  Rng rng = MakeRng(3, 0);
  for (Architecture arch : kAllArchitectures) {
    CAPTURE(ArchitectureName(arch));
    Summariser model(arch, TinyDims(), 9);
    std::vector<FeatureVector> rows;
    for (int i = 0; i < 5; ++i) rows.push_back(FeatureVector::Random());
    model.set_normalizer(FeatureNormalizer::Fit(rows));
    FeatureMask mask = AllFeatures();
    mask.reset(static_cast<size_t>(FeatureId::kAbstractRouge));
    model.set_feature_mask(mask);
    std::stringstream buf;
    model.Save(buf);
    Summariser back = Summariser::Load(buf);
    CHECK(back.arch() == arch);
    CHECK(back.feature_mask() == mask);
    CHECK(back.normalizer().mean() == model.normalizer().mean());
    CHECK(back.normalizer().stddev() == model.normalizer().stddev());
    for (int i = 0; i < 5; ++i) {
      ModelInput in = RandomInput(model.dims(), rng, 1 + i);
      CHECK(back.Probability(in) == model.Probability(in));
    }
  }
  std::istringstream bad("garbage\n");
  CHECK_THROWS_AS(Summariser::Load(bad), Error);
}

TEST_CASE("feature mask zeroes features after normalisation") {
  Summariser model(Architecture::kFNet, TinyDims(), 1);
  model.set_normalizer(FeatureNormalizer(FeatureVector::Ones(), FeatureVector::Constant(2.0)));
  FeatureMask mask = AllFeatures();
  mask.reset(0);
  model.set_feature_mask(mask);
  FeatureVector raw = FeatureVector::Constant(5.0);
  Eigen::VectorXd z = model.PrepareFeatures(raw);
  CHECK(z[0] == 0.0);
  for (int i = 1; i < kNumFeatures; ++i) CHECK(z[i] == 2.0);
}

TEST_CASE("ensemble formula") {
  CHECK(Ensemble(0.2, 0.8, 0.0) == doctest::Approx(0.5));
  CHECK(Ensemble(0.2, 0.8, -1.0) == doctest::Approx(0.2));
  CHECK(Ensemble(0.2, 0.8, 1.0) == doctest::Approx(0.8));
  CHECK(Ensemble(0.3, 0.3, 0.45) == doctest::Approx(0.3));
  CHECK_THROWS_AS(Ensemble(0.2, 0.8, 1.5), Error);
  CHECK_THROWS_AS(Ensemble(1.2, 0.8, 0.0), Error);
  Rng rng = MakeRng(4, 0);
  for (int i = 0; i < 200; ++i) {
    double p1 = UniformUnit(rng), p2 = UniformUnit(rng), c = 2 * UniformUnit(rng) - 1;
    double e = Ensemble(p1, p2, c);
    CHECK(e >= std::min(p1, p2) - 1e-12);
    CHECK(e <= std::max(p1, p2) + 1e-12);
  }
}

TEST_CASE("ensemble weight grid and tuning") {
  auto grid = EnsembleWeightGrid();
  CHECK(grid.size() == 41);
  CHECK(grid.front() == -1.0);
  CHECK(grid.back() == 1.0);
  for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.05));
  CHECK(TuneEnsembleWeight([](double c) { return -(c - 0.3) * (c - 0.3); }) == doctest::Approx(0.3));
  // Ties keep the first grid point.
  CHECK(TuneEnsembleWeight([](double) { return 1.0; }) == -1.0);
}

TEST_CASE("ensemble config json") {
  auto cfg = EnsembleConfig::SafPlusF(0.25);
  auto back = EnsembleConfig::FromJson(cfg.ToJson());
  CHECK(back.c == 0.25);
  CHECK(back.s1 == Architecture::kSAFNet);
  CHECK(back.s2 == Architecture::kFNet);
  CHECK_THROWS_AS(EnsembleConfig::FromJson("{\"c\": 3, \"s1\": \"SNet\", \"s2\": \"FNet\"}"), Error);
  CHECK_THROWS_AS(EnsembleConfig::FromJson("{\"c\": 0}"), Error);
  CHECK_THROWS_AS(EnsembleConfig::FromJson("nope"), Error);
}

TEST_CASE("single-feature rankers") {
  CHECK_THROWS_AS(RequireRankableFeature(FeatureId::kSentenceLength), Error);
  CHECK_THROWS_AS(RequireRankableFeature(FeatureId::kNumericCount), Error);
  CHECK_THROWS_AS(RequireRankableFeature(FeatureId::kLocation), Error);
  CHECK_NOTHROW(RequireRankableFeature(FeatureId::kAbstractRouge));
  SentenceFeatures f;
  f.tf_idf = 0.7;
  CHECK(SingleFeatureScore(f, FeatureId::kTfIdf) == 0.7);
}

TEST_CASE("FNet learns a separable rule") {
  // Label 1 exactly when the first two features sum above zero.
  Rng rng = MakeRng(12, 0);
  std::vector<ModelInput> inputs;
  std::vector<int> labels;
  for (int i = 0; i < 600; ++i) {
    ModelInput in;
    Eigen::VectorXd f(kNumFeatures);
    for (int j = 0; j < kNumFeatures; ++j) f[j] = 2 * UniformUnit(rng) - 1;
    in.features = f;
    labels.push_back(f[0] + f[1] > 0 ? 1 : 0);
    inputs.push_back(in);
  }
  ModelDims dims;
  dims.hidden = 16;
  Summariser model(Architecture::kFNet, dims, 5);
  nn::TrainConfig cfg;
  cfg.max_epochs = 40;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.01;
  cfg.dropout = 0.0;
  auto r = nn::Train<double>(
      model.params(), 500,
      [&](size_t i, Rng&) { return model.AccumulateGradient(inputs[i], labels[i]); }, 100,
      [&](size_t i) { return model.Loss(inputs[500 + i], labels[500 + i]); }, cfg);
  int correct = 0;
  for (size_t i = 500; i < 600; ++i)
    correct += (model.Probability(inputs[i]) > 0.5) == (labels[i] == 1);
  CHECK(correct > 90);
  CHECK(r.best_dev_loss < r.dev_loss.front());
}

TEST_CASE("training on fixture instances") {
  FixtureConfig fc;
  fc.papers = 6;
  auto papers = GenerateFixtureCorpus(fc);
  auto instances = BuildCsPubSum(papers, DatasetSpec{});
  auto stats = CorpusStats::Build(papers, StopwordSet::Default());
  EncodingResources res;
  res.stats = &stats;
  nn::TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.seed = 1;
  auto a = TrainSummariser(Architecture::kFNet, papers, instances, res, cfg);
  auto b = TrainSummariser(Architecture::kFNet, papers, instances, res, cfg);
  CHECK(a.model.normalizer().fitted());
  CHECK(a.history.train_loss == b.history.train_loss);
  auto scores = ScoreBody(a.model, papers[0], res);
  CHECK(scores == ScoreBody(b.model, papers[0], res));
  CHECK(scores.size() == BodySentences(papers[0]).size());
  for (double s : scores) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  auto preds = PredictInstances(a.model, papers, instances, res);
  CHECK(preds.size() == instances.size());
  CHECK_THROWS_AS(TrainSummariser(Architecture::kSNet, papers, instances, res, cfg), Error);
}

TEST_CASE("feature-only models ignore the embedding table") {
  FixtureConfig fc;
  fc.papers = 1;
  auto papers = GenerateFixtureCorpus(fc);
  auto stats = CorpusStats::Build(papers, StopwordSet::Default());
  EmbeddingTable::Matrix m = EmbeddingTable::Matrix::Ones(1, 5);
  EmbeddingTable table({"graph"}, m);
  EncodingResources res{&table, &stats, {}};
  Summariser fnet(Architecture::kFNet, ModelDims{}, 1);
  fnet.set_normalizer(FeatureNormalizer(FeatureVector::Zero(), FeatureVector::Ones()));
  CHECK(ScoreBody(fnet, papers[0], res).size() == BodySentences(papers[0]).size());
  Summariser snet(Architecture::kSNet, TinyDims(), 1);
  CHECK_THROWS_AS(ScoreBody(snet, papers[0], res), Error);
}

}  // namespace
}  // namespace pubsum
