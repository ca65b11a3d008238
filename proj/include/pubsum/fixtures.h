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

#ifndef PUBSUM_FIXTURES_H_
#define PUBSUM_FIXTURES_H_

#include <array>
#include <cstdint>
#include <vector>

#include "pubsum/corpus.h"

namespace pubsum {

// Body sections of a synthetic paper, in document order.
enum class FixtureSection : int { kIntroduction, kRelatedWork, kMethods, kResults, kConclusion };
inline constexpr int kNumFixtureSections = 5;

struct FixtureConfig {
  int papers = 50;
  uint64_t seed = 1;
  int min_highlights = 3;
  int max_highlights = 5;
  // Chance that a highlight is copied verbatim into the body.
  double copy_probability = 0.4;
  // Where verbatim copies and paraphrases of the highlights land.
  std::array<double, kNumFixtureSections> copy_weights = {0.6, 0.0, 0.05, 0.1, 0.25};
  std::array<double, kNumFixtureSections> paraphrase_weights = {0.35, 0.0, 0.1, 0.3, 0.25};
  int paraphrases_per_highlight = 3;
  int partial_sentences = 8;
  int decoy_sentences = 5;
  // Filler sentences per section (noise), before the planted ones.
  std::array<int, kNumFixtureSections> filler = {4, 6, 10, 8, 2};
};

// Synthetic papers with planted summary-worthy sentences: verbatim copies,
// paraphrases and partial paraphrases of the highlights, plus cue-phrase
// decoys and numeric filler. Deterministic in the config.
std::vector<Paper> GenerateFixtureCorpus(const FixtureConfig& config);

}  // namespace pubsum

#endif  // PUBSUM_FIXTURES_H_
