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

#include "pubsum/dataset.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "pubsum/error.h"
#include "pubsum/fixtures.h"
#include "test_util.h"

namespace pubsum {
namespace {

using testing::MakePaper;

std::string Serialize(const std::vector<LabeledInstance>& v) {
  std::ostringstream out;
  WriteDataset(out, v);
  return out.str();
}

std::vector<Paper> Fixture(int n = 50, uint64_t seed = 1) {
  FixtureConfig cfg;
  cfg.papers = n;
  cfg.seed = seed;
  return GenerateFixtureCorpus(cfg);
}

// Body sentences of one paper as (section, index) keys with their f-score,
// computed without the library's sorting.
struct Scored {
  int section, sentence;
  double f;
};
std::vector<Scored> OracleScores(const Paper& p) {
  Tokens gold;
  for (const auto& h : p.highlights) gold.insert(gold.end(), h.tokens.begin(), h.tokens.end());
  std::vector<Scored> out;
  for (size_t s = 0; s < p.sections.size(); ++s) {
    for (size_t i = 0; i < p.sections[s].sentences.size(); ++i) {
      out.push_back({static_cast<int>(s), static_cast<int>(i),
                     RougeL(p.sections[s].sentences[i].tokens, gold).f_score});
    }
  }
  return out;
}

std::vector<std::string> Filler(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("Filler number " + std::to_string(i) + " here.");
  return out;
}

TEST_CASE("score body sentences") {
  Paper p = MakePaper("p", {"graphs are big", "trees are small"},
                      {{"Introduction", {"nothing shared here", "graphs are big", "graphs are big"}},
                       {"Results", {"trees maybe"}}});
  auto scored = ScoreBodySentences(p);
  REQUIRE(scored.size() == 4);
  // The verbatim copy comes first; recall is its share of the joined highlights.
  CHECK(scored[0].ref == BodyRef{0, 1});
  CHECK(scored[0].score.recall == doctest::Approx(3.0 / 6.0));
  CHECK(scored[0].score.precision == doctest::Approx(1.0));
  CHECK(scored[1].ref == BodyRef{0, 2});
  CHECK(scored.back().score.f_score == 0.0);
  for (size_t i = 1; i < scored.size(); ++i) CHECK(scored[i - 1].score.f_score >= scored[i].score.f_score);

  Paper none = MakePaper("n", {"alpha beta"}, {{"Introduction", {"gamma", "delta"}}});
  for (const auto& s : ScoreBodySentences(none)) CHECK(s.score.f_score == 0.0);
  Paper empty = MakePaper("e", {"alpha"}, {});
  CHECK_THROWS_WITH_AS(ScoreBodySentences(empty), doctest::Contains("'e'"), Error);
}

TEST_CASE("cspubsum balances highlights with bottom-pool negatives") {
  auto papers = Fixture(20);
  DatasetSpec spec;
  spec.seed = 5;
  auto instances = BuildCsPubSum(papers, spec);
  std::map<std::string, const Paper*> by_id;
  for (const auto& p : papers) by_id[p.id] = &p;
  std::map<std::string, std::pair<int, int>> counts;
  for (const auto& inst : instances) {
    auto& c = counts[inst.paper_id];
    (inst.label ? c.first : c.second)++;
    CHECK(inst.location != LocationCategory::kAbstract);
    if (inst.label == 1) {
      CHECK(inst.IsHighlight());
      CHECK(inst.location == LocationCategory::kHighlight);
    } else {
      const Paper& p = *by_id.at(inst.paper_id);
      auto oracle = OracleScores(p);
      std::vector<double> f;
      for (const auto& s : oracle) f.push_back(s.f);
      std::sort(f.begin(), f.end());
      size_t pool = static_cast<size_t>(std::ceil(0.1 * f.size()));
      if (pool < p.highlights.size()) pool = static_cast<size_t>(std::ceil(0.2 * f.size()));
      CHECK(inst.rouge_vs_highlights <= f[pool - 1] + 1e-15);
    }
  }
  CHECK(counts.size() == papers.size());
  for (const auto& p : papers) {
    CHECK(counts[p.id].first == static_cast<int>(p.highlights.size()));
    CHECK(counts[p.id].second == static_cast<int>(p.highlights.size()));
  }
  CHECK(Serialize(instances) == Serialize(BuildCsPubSum(papers, spec)));
  CHECK(Serialize(instances) == Serialize(BuildCsPubSum(papers, spec, {}, 4)));
  spec.seed = 6;
  CHECK(Serialize(instances) != Serialize(BuildCsPubSum(papers, spec)));
}

TEST_CASE("cspubsum widens a small pool then gives up") {
  // 10 body sentences: the 10% pool holds 1, the 20% pool holds 2.
  Paper two = MakePaper("two", {"alpha one", "beta two"}, {{"Introduction", Filler(10)}});
  auto inst = BuildCsPubSum({two}, DatasetSpec{});
  CHECK(inst.size() == 4);
  Paper three = MakePaper("three", {"alpha one", "beta two", "gamma three"},
                          {{"Introduction", Filler(10)}});
  CHECK_THROWS_WITH_AS(BuildCsPubSum({three}, DatasetSpec{}), doctest::Contains("three"), Error);
}

TEST_CASE("extended body positive counts") {
  CHECK(ExtendedBodyPositives(20, 60, 4) == 20);
  CHECK(ExtendedBodyPositives(20, 48, 4) == 20);
  CHECK(ExtendedBodyPositives(20, 30, 4) == 13);
  CHECK(ExtendedBodyPositives(20, 10, 4) == 3);
  CHECK(ExtendedBodyPositives(20, 4, 4) == 0);
  CHECK(ExtendedBodyPositives(20, 2, 4) == 0);
}

TEST_CASE("cspubsumext on a large paper gives 24 + 24") {
  std::vector<std::string> body = Filler(44);
  for (int i = 0; i < 4; ++i) body.push_back("graph kernel claim " + std::to_string(i) + " holds.");
  Paper p = MakePaper("big", {"graph kernel claim one", "two", "three", "four"},
                      {{"Introduction", body}});
  auto split = BuildCsPubSumExt({p}, DatasetSpec{});
  int pos = 0, neg = 0;
  for (const auto* part : {&split.train, &split.test}) {
    for (const auto& inst : *part) (inst.label ? pos : neg)++;
  }
  CHECK(pos == 24);
  CHECK(neg == 24);
  CHECK(split.train.size() == 32);
  CHECK(split.test.size() == 16);
}

TEST_CASE("cspubsumext invariants on the fixture") {
  auto papers = Fixture(50);
  DatasetSpec spec;
  spec.seed = 3;
  auto split = BuildCsPubSumExt(papers, spec);
  std::map<std::string, std::vector<const LabeledInstance*>> by_paper;
  for (const auto* part : {&split.train, &split.test}) {
    for (const auto& inst : *part) by_paper[inst.paper_id].push_back(&inst);
  }
  REQUIRE(by_paper.size() == papers.size());
  for (const auto& p : papers) {
    const auto& rows = by_paper[p.id];
    int pos = 0, neg = 0;
    double min_body_pos = 2.0, max_neg = -1.0;
    std::set<std::pair<int, int>> positive_keys, negative_keys;
    for (const auto* r : rows) {
      CHECK(r->location != LocationCategory::kAbstract);
      std::pair<int, int> key{r->section_index, r->sentence.index_in_section};
      if (r->label == 1) {
        ++pos;
        if (!r->IsHighlight()) {
          min_body_pos = std::min(min_body_pos, r->rouge_vs_highlights);
          positive_keys.insert(key);
        }
      } else {
        ++neg;
        CHECK(!r->IsHighlight());
        max_neg = std::max(max_neg, r->rouge_vs_highlights);
        negative_keys.insert(key);
      }
    }
    CHECK(pos == neg);
    CHECK(min_body_pos >= max_neg);
    for (const auto& k : positive_keys) CHECK(negative_keys.count(k) == 0);

    // Top-k body positives equal an independent stable sort of the scores.
    auto oracle = OracleScores(p);
    std::stable_sort(oracle.begin(), oracle.end(),
                     [](const Scored& a, const Scored& b) { return a.f > b.f; });
    int top = ExtendedBodyPositives(20, static_cast<int>(oracle.size()),
                                    static_cast<int>(p.highlights.size()));
    std::set<std::pair<int, int>> expected;
    for (int i = 0; i < top; ++i) expected.insert({oracle[i].section, oracle[i].sentence});
    CHECK(positive_keys == expected);
  }
  CHECK(Serialize(split.train) == Serialize(BuildCsPubSumExt(papers, spec).train));
  CHECK(Serialize(split.test) == Serialize(BuildCsPubSumExt(papers, spec, {}, 3).test));
}

TEST_CASE("cspubsumext split is stratified per paper") {
  auto papers = Fixture(10);
  auto split = BuildCsPubSumExt(papers, DatasetSpec{});
  std::map<std::string, std::array<int, 4>> c;  // train pos, train neg, test pos, test neg
  for (const auto& r : split.train) c[r.paper_id][r.label ? 0 : 1]++;
  for (const auto& r : split.test) c[r.paper_id][r.label ? 2 : 3]++;
  for (const auto& [id, v] : c) {
    CHECK(v[0] == v[1]);
    CHECK(v[2] == v[3]);
    double total = v[0] + v[2];
    CHECK(v[0] == std::llround(total * 2.0 / 3.0));
  }
}

TEST_CASE("cspubsumext on a short paper never reuses a sentence") {
  Paper p = MakePaper("short", {"alpha beta", "gamma delta"},
                      {{"Introduction", {"alpha beta x", "gamma delta y", "alpha", "z", "w", "v",
                                         "u", "t", "s", "r"}}});
  auto split = BuildCsPubSumExt({p}, DatasetSpec{});
  std::vector<LabeledInstance> all = split.train;
  all.insert(all.end(), split.test.begin(), split.test.end());
  int pos = 0, neg = 0;
  std::set<std::pair<int, int>> seen;
  for (const auto& r : all) {
    (r.label ? pos : neg)++;
    if (!r.IsHighlight()) CHECK(seen.insert({r.section_index, r.sentence.index_in_section}).second);
  }
  CHECK(pos == neg);
  CHECK(pos == 2 + ExtendedBodyPositives(20, 10, 2));
}

TEST_CASE("negative shuffle draws from the bottom pool") {
  auto papers = Fixture(10);
  DatasetSpec spec;
  spec.negative_shuffle = true;
  spec.negative_pool_fraction = 0.5;
  auto a = BuildCsPubSumExt(papers, spec);
  auto b = BuildCsPubSumExt(papers, DatasetSpec{});
  CHECK(Serialize(a.train) != Serialize(b.train));
  CHECK(Serialize(a.train) == Serialize(BuildCsPubSumExt(papers, spec).train));
  for (const auto* part : {&a.train, &a.test}) {
    std::map<std::string, std::pair<int, int>> c;
    for (const auto& r : *part) (r.label ? c[r.paper_id].first : c[r.paper_id].second)++;
    for (const auto& [id, v] : c) CHECK(v.first == v.second);
  }
}

TEST_CASE("spec validation") {
  auto papers = Fixture(2);
  DatasetSpec bad;
  bad.top_k_positives = 0;
  CHECK_THROWS_AS(BuildCsPubSumExt(papers, bad), Error);
  bad = DatasetSpec{};
  bad.negative_pool_fraction = 0.0;
  CHECK_THROWS_AS(BuildCsPubSum(papers, bad), Error);
  bad = DatasetSpec{};
  bad.train_fraction_ext = 1.0;
  CHECK_THROWS_AS(BuildCsPubSumExt(papers, bad), Error);
}

TEST_CASE("dataset serialization round trip") {
  auto papers = Fixture(3);
  auto split = BuildCsPubSumExt(papers, DatasetSpec{});
  std::string text = Serialize(split.train);
  std::istringstream in(text);
  auto back = ReadDataset(in);
  REQUIRE(back.size() == split.train.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].paper_id == split.train[i].paper_id);
    CHECK(back[i].label == split.train[i].label);
    CHECK(back[i].location == split.train[i].location);
    CHECK(back[i].rouge_vs_highlights == split.train[i].rouge_vs_highlights);
    CHECK(back[i].sentence.tokens == split.train[i].sentence.tokens);
    CHECK(back[i].section_index == split.train[i].section_index);
  }
  CHECK(Serialize(back) == text);
  // Field order is fixed.
  std::string first = text.substr(0, text.find('\n'));
  CHECK(first.find("\"paper_id\"") < first.find("\"section_index\""));
  CHECK(first.find("\"label\"") < first.find("\"text\""));
  CHECK_THROWS_WITH_AS(ParseInstanceJson("{\"paper_id\":\"x\"}", 4), doctest::Contains("line 4"), Error);
}

}  // namespace
}  // namespace pubsum
