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

#include "pubsum/baselines.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>

#include "doctest.h"
#include "pubsum/fixtures.h"
#include "pubsum/random.h"
#include "test_util.h"

namespace pubsum {
namespace {

using testing::MakePaper;

const StopwordSet& Sw() { return StopwordSet::Default(); }

Paper ThreeSentences() {
  return MakePaper("s", {"h"}, {{"Introduction", {"alpha beta", "alpha gamma", "delta"}}});
}

TEST_CASE("SumBasic hand trace") {
  // alpha .4, beta gamma delta .2 each. Scores .3 .3 .2, first tie wins;
  // alpha then drops to .16, so delta (.2) beats alpha gamma (.18).
  auto out = SumBasic(ThreeSentences(), 3, Sw());
  REQUIRE(out.size() == 3);
  CHECK(out[0] == BodyRef{0, 0});
  CHECK(out[1] == BodyRef{0, 2});
  CHECK(out[2] == BodyRef{0, 1});
}

TEST_CASE("KL divergence") {
  std::vector<Tokens> doc{{"a", "b"}, {"a"}};
  CHECK(SmoothedKl(doc, doc) == doctest::Approx(0.0));
  // p = (3/5, 2/5), q = (1/3, 2/3).
  double expected = 0.6 * std::log(0.6 * 3) + 0.4 * std::log(0.4 * 1.5);
  CHECK(SmoothedKl(doc, {{"b"}}) == doctest::Approx(expected));
  CHECK(SmoothedKl(doc, {{"a"}}) < SmoothedKl(doc, {{"b"}}));
}

TEST_CASE("KLSum takes the divergence-minimising sentence at every step") {
  Paper p = MakePaper("k", {"h"},
                      {{"Introduction",
                        {"graph node edge", "graph graph weight", "node cache", "edge weight path",
                         "random walk graph"}}});
  auto out = KlSum(p, 5, Sw());
  REQUIRE(out.size() == 5);
  std::vector<Tokens> content;
  for (const auto& ref : BodySentences(p)) content.push_back(At(p, ref).tokens);
  std::vector<Tokens> summary;
  std::vector<bool> used(5, false);
  for (const auto& chosen : out) {
    double best = 1e300;
    for (int i = 0; i < 5; ++i) {
      if (used[i]) continue;
      auto trial = summary;
      trial.push_back(content[i]);
      best = std::min(best, SmoothedKl(content, trial));
    }
    summary.push_back(content[chosen.sentence]);
    CHECK(SmoothedKl(content, summary) == doctest::Approx(best));
    used[chosen.sentence] = true;
  }
  CHECK(SmoothedKl(content, summary) == doctest::Approx(0.0));
}

TEST_CASE("TextRank graph weights") {
  auto w = TextRankGraph({{"a", "b", "c"}, {"b", "c", "d"}, {"x"}, {"x"}});
  CHECK(w(0, 1) == doctest::Approx(2.0 / (2 * std::log(3.0))));
  CHECK(w(1, 0) == w(0, 1));
  CHECK(w(0, 2) == 0.0);
  CHECK(w(0, 0) == 0.0);
  // Two one-word sentences: log lengths sum to zero.
  CHECK(w(2, 3) == 1.0);
}

TEST_CASE("LexRank graph thresholds cosine similarity") {
  auto adj = LexRankGraph({{"a", "b"}, {"a", "b"}, {"c", "d"}, {"a", "d"}}, 0.1);
  CHECK(adj(0, 1) == 1.0);
  CHECK(adj(0, 2) == 0.0);
  CHECK(adj(2, 3) == 1.0);
  CHECK(adj == adj.transpose());
  CHECK(adj.diagonal().isZero());
  auto none = LexRankGraph({{"a", "b"}, {"a", "c"}}, 0.99);
  CHECK(none.isZero());
}

TEST_CASE("power iteration matches the stationary eigenvector") {
  Rng rng = MakeRng(21, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6;
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w(i, j) = i == j ? 0.0 : UniformUnit(rng);
    if (trial == 4) w.row(5).setZero();  // dangling node
    const double d = 0.85;
    Eigen::MatrixXd transition(n, n);
    for (int i = 0; i < n; ++i) {
      double s = w.row(i).sum();
      for (int j = 0; j < n; ++j)
        transition(j, i) = (1 - d) / n + d * (s > 0 ? w(i, j) / s : 1.0 / n);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(transition);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
    CHECK(es.eigenvalues()[best].real() == doctest::Approx(1.0));
    Eigen::VectorXd oracle = es.eigenvectors().col(best).real();
    oracle /= oracle.sum();
    Eigen::VectorXd rank = PowerIterationRank(w, d, 1e-12, 10000);
    CHECK(rank.sum() == doctest::Approx(1.0));
    CHECK((rank - oracle).lpNorm<Eigen::Infinity>() < 1e-9);
  }
  CHECK_THROWS_AS(PowerIterationRank(Eigen::MatrixXd::Zero(2, 2), 1.0, 1e-6, 10), Error);
  CHECK(PowerIterationRank(Eigen::MatrixXd::Zero(0, 0), 0.85, 1e-6, 10).size() == 0);
  auto uniform = PowerIterationRank(Eigen::MatrixXd::Zero(3, 3), 0.85, 1e-9, 100);
  CHECK(uniform.isApprox(Eigen::VectorXd::Constant(3, 1.0 / 3)));
}

TEST_CASE("LSA scores") {
  Eigen::MatrixXd diag = Eigen::Vector3d(3, 2, 1).asDiagonal();
  auto s = LsaScores(diag, 2);
  CHECK(s(0) == doctest::Approx(3));
  CHECK(s(1) == doctest::Approx(2));
  CHECK(s(2) == doctest::Approx(0).epsilon(1e-9));
  // With every topic kept the score is the length of the sentence column.
  Rng rng = MakeRng(4, 0);
  Eigen::MatrixXd a(7, 5);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = static_cast<double>(UniformIndex(rng, 3));
  auto full = LsaScores(a, 5);
  for (Eigen::Index j = 0; j < 5; ++j) CHECK(full(j) == doctest::Approx(a.col(j).norm()));
  // The SVD used underneath multiplies back to the input.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd back = svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  CHECK((back - a).norm() < 1e-9);
  CHECK(LsaScores(Eigen::MatrixXd::Zero(3, 3), 2).size() == 0);
}

TEST_CASE("LSA falls back on an all-stopword paper") {
  Paper p = MakePaper("z", {"h"}, {{"Introduction", {"the of the", "and", "the the the of"}}});
  std::vector<std::string> warnings;
  auto out = LsaSummarise(p, 1, Sw(), {}, &warnings);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == BodyRef{0, 2});
  CHECK(warnings.size() == 1);
}

TEST_CASE("baselines respect k") {
  FixtureConfig cfg;
  cfg.papers = 3;
  auto papers = GenerateFixtureCorpus(cfg);
  for (const auto& p : papers) {
    const size_t n = BodySentences(p).size();
    for (int k : {0, 1, 10, 100000}) {
      const size_t want = std::min(n, static_cast<size_t>(k));
      for (const auto& out : {SumBasic(p, k, Sw()), KlSum(p, k, Sw()), TextRank(p, k, Sw()),
                              LexRank(p, k, Sw()), LsaSummarise(p, k, Sw())}) {
        CHECK(out.size() == want);
        std::set<BodyRef> unique(out.begin(), out.end());
        CHECK(unique.size() == out.size());
      }
    }
    CHECK(TextRank(p, 10, Sw()) == TextRank(p, 10, Sw()));
  }
}

}  // namespace
}  // namespace pubsum
