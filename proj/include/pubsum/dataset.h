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

#ifndef PUBSUM_DATASET_H_
#define PUBSUM_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pubsum/corpus.h"
#include "pubsum/rouge.h"

namespace pubsum {

// One training row: a sentence, where it came from, and its label.
struct LabeledInstance {
  std::string paper_id;
  Sentence sentence;
  LocationCategory location = LocationCategory::kOther;
  int label = 0;  // 1 = summary sentence
  double rouge_vs_highlights = 0.0;
  int section_index = -1;  // -1 for highlight statements

  bool IsHighlight() const { return section_index < 0; }
};

struct DatasetSpec {
  int top_k_positives = 20;
  double negative_pool_fraction = 0.10;
  uint64_t seed = 0;
  double train_fraction_ext = 2.0 / 3.0;
  // Extended variant only: draw negatives at random from the bottom pool
  // instead of taking the lowest-scored sentences in order.
  bool negative_shuffle = false;
};

struct ScoredSentence {
  BodyRef ref;
  RougeScore score;
};

// Every body sentence scored against the concatenated highlights, sorted by
// descending f-score; equal scores keep document order. Throws if the paper
// has no body sentences.
std::vector<ScoredSentence> ScoreBodySentences(const Paper& paper, const RougeConfig& cfg = {});

// Highlights as positives, an equal number of negatives sampled from the
// lowest-scoring body sentences, shuffled.
std::vector<LabeledInstance> BuildCsPubSum(const std::vector<Paper>& papers,
                                           const DatasetSpec& spec,
                                           const RougeConfig& cfg = {}, int jobs = 1);

struct DatasetSplit {
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> test;
};

// Highlights plus the top-scoring body sentences as positives, the same
// number of lowest-scoring body sentences as negatives, split per paper into
// train and test with labels stratified.
DatasetSplit BuildCsPubSumExt(const std::vector<Paper>& papers, const DatasetSpec& spec,
                              const RougeConfig& cfg = {}, int jobs = 1);

// Number of non-highlight positives the extended builder takes from a paper
// with `body` body sentences and `highlights` highlight statements. Capped so
// that an equal number of distinct negatives remains.
int ExtendedBodyPositives(int top_k, int body, int highlights);

std::string InstanceToJson(const LabeledInstance& instance);
LabeledInstance ParseInstanceJson(std::string_view line, size_t line_number);
void WriteDataset(std::ostream& out, const std::vector<LabeledInstance>& instances);
std::vector<LabeledInstance> ReadDataset(std::istream& in);
void SaveDataset(const std::string& path, const std::vector<LabeledInstance>& instances);
std::vector<LabeledInstance> LoadDataset(const std::string& path);

}  // namespace pubsum

#endif  // PUBSUM_DATASET_H_
