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

#include "pubsum/fixtures.h"

#include <set>
#include <sstream>

#include "doctest.h"
#include "pubsum/error.h"
#include "pubsum/evaluation.h"

namespace pubsum {
namespace {

TEST_CASE("fixture corpus shape") {
  auto papers = GenerateFixtureCorpus({});
  REQUIRE(papers.size() == 50);
  std::set<std::string> ids;
  for (const auto& p : papers) {
    CHECK_NOTHROW(ValidatePaper(p));
    ids.insert(p.id);
    CHECK(p.highlights.size() >= 3);
    CHECK(p.highlights.size() <= 5);
    CHECK(!p.abstract.empty());
    CHECK(!p.keywords.empty());
    CHECK(p.sections.size() == 5);
    CHECK(BodySentences(p).size() >= 30);
    for (const auto& s : p.sections) CHECK(!s.sentences.empty());
  }
  CHECK(ids.size() == 50);
  CHECK(papers[0].id == "fixture-0000");
}

TEST_CASE("fixture corpus is deterministic per seed") {
  FixtureConfig cfg;
  cfg.papers = 5;
  std::ostringstream a, b, c;
  WriteCorpus(a, GenerateFixtureCorpus(cfg));
  WriteCorpus(b, GenerateFixtureCorpus(cfg));
  cfg.seed = 2;
  WriteCorpus(c, GenerateFixtureCorpus(cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str() != c.str());
  // Paper i does not depend on how many papers follow it.
  cfg.seed = 1;
  cfg.papers = 3;
  auto shorter = GenerateFixtureCorpus(cfg);
  cfg.papers = 5;
  auto longer = GenerateFixtureCorpus(cfg);
  std::ostringstream s, l;
  WriteCorpus(s, shorter);
  WriteCorpus(l, {longer.begin(), longer.begin() + 3});
  CHECK(s.str() == l.str());
}

TEST_CASE("copy probability controls verbatim highlights") {
  FixtureConfig cfg;
  cfg.papers = 20;
  cfg.copy_probability = 0.0;
  auto none = CopyPasteAnalysis(GenerateFixtureCorpus(cfg));
  CHECK(!none.shares);
  cfg.copy_probability = 1.0;
  auto all = CopyPasteAnalysis(GenerateFixtureCorpus(cfg));
  REQUIRE(all.shares);
  int copies = 0;
  for (int c : all.counts) copies += c;
  int highlights = 0;
  for (const auto& p : GenerateFixtureCorpus(cfg)) highlights += static_cast<int>(p.highlights.size());
  CHECK(copies == highlights);
  CHECK(all.counts[static_cast<size_t>(LocationCategory::kIntroduction)] >
        all.counts[static_cast<size_t>(LocationCategory::kMethod)]);
}

TEST_CASE("fixture configuration errors") {
  FixtureConfig cfg;
  cfg.papers = 0;
  CHECK_THROWS_AS(GenerateFixtureCorpus(cfg), Error);
  cfg.papers = -3;
  CHECK_THROWS_AS(GenerateFixtureCorpus(cfg), Error);
  cfg = {};
  cfg.copy_probability = 1.5;
  CHECK_THROWS_AS(GenerateFixtureCorpus(cfg), Error);
  cfg = {};
  cfg.min_highlights = 6;
  cfg.max_highlights = 5;
  CHECK_THROWS_AS(GenerateFixtureCorpus(cfg), Error);
}

}  // namespace
}  // namespace pubsum
