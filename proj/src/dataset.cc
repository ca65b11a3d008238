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
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pubsum/parallel.h"
#include "pubsum/random.h"

namespace pubsum {
namespace {

using json = nlohmann::ordered_json;

// Stream ids keep per-paper sampling independent of the final shuffles.
constexpr uint64_t kShuffleStream = 0xfffffff0ULL;
constexpr uint64_t kTestShuffleStream = 0xfffffff1ULL;

LabeledInstance FromBody(const Paper& paper, const ScoredSentence& scored, int label) {
  LabeledInstance inst;
  inst.paper_id = paper.id;
  inst.sentence = At(paper, scored.ref);
  inst.location = paper.sections[scored.ref.section].category;
  inst.label = label;
  inst.rouge_vs_highlights = scored.score.f_score;
  inst.section_index = scored.ref.section;
  return inst;
}

LabeledInstance FromHighlight(const Paper& paper, size_t index, const Tokens& gold,
                              const RougeConfig& cfg) {
  LabeledInstance inst;
  inst.paper_id = paper.id;
  inst.sentence = paper.highlights[index];
  inst.location = LocationCategory::kHighlight;
  inst.label = 1;
  inst.rouge_vs_highlights = RougeL(inst.sentence.tokens, gold, cfg).f_score;
  inst.section_index = -1;
  return inst;
}

// Body sentences in ascending score order, ties by document order.
std::vector<ScoredSentence> Ascending(std::vector<ScoredSentence> scored) {
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.score.f_score != b.score.f_score) return a.score.f_score < b.score.f_score;
    return a.ref < b.ref;
  });
  return scored;
}

size_t PoolSize(double fraction, size_t n) {
  return std::min(n, static_cast<size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
}

std::vector<LabeledInstance> CsPubSumForPaper(const Paper& paper, size_t paper_index,
                                              const DatasetSpec& spec,
                                              const RougeConfig& cfg) {
  const auto ascending = Ascending(ScoreBodySentences(paper, cfg));
  const size_t need = paper.highlights.size();
  size_t pool = PoolSize(spec.negative_pool_fraction, ascending.size());
  if (pool < need) pool = PoolSize(std::min(1.0, 2 * spec.negative_pool_fraction), ascending.size());
  if (pool < need) {
    throw Error("paper '" + paper.id + "': negative pool has " + std::to_string(pool) +
                " sentences but " + std::to_string(need) + " negatives are needed");
  }
  const Tokens gold = Concatenate(paper.highlights);
  std::vector<LabeledInstance> out;
  for (size_t i = 0; i < need; ++i) out.push_back(FromHighlight(paper, i, gold, cfg));
  Rng rng = MakeRng(spec.seed, paper_index);
  for (size_t idx : SampleWithoutReplacement(pool, need, rng))
    out.push_back(FromBody(paper, ascending[idx], 0));
  return out;
}

void ValidateSpec(const DatasetSpec& spec) {
  if (spec.top_k_positives < 1) throw Error("dataset: top_k_positives must be >= 1");
  if (!(spec.negative_pool_fraction > 0.0 && spec.negative_pool_fraction <= 1.0))
    throw Error("dataset: negative_pool_fraction must be in (0, 1]");
  if (!(spec.train_fraction_ext > 0.0 && spec.train_fraction_ext < 1.0))
    throw Error("dataset: train_fraction_ext must be in (0, 1)");
}

}  // namespace

std::vector<ScoredSentence> ScoreBodySentences(const Paper& paper, const RougeConfig& cfg) {
  const auto refs = BodySentences(paper);
  if (refs.empty()) throw Error("paper '" + paper.id + "' has no body sentences");
  const Tokens gold = Concatenate(paper.highlights);
  std::vector<ScoredSentence> scored;
  scored.reserve(refs.size());
  for (const auto& ref : refs) scored.push_back({ref, RougeL(At(paper, ref).tokens, gold, cfg)});
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.score.f_score > b.score.f_score;
  });
  return scored;
}

std::vector<LabeledInstance> BuildCsPubSum(const std::vector<Paper>& papers,
                                           const DatasetSpec& spec, const RougeConfig& cfg,
                                           int jobs) {
  ValidateSpec(spec);
  auto per_paper = ParallelMap(papers.size(), jobs, [&](size_t i) {
    return CsPubSumForPaper(papers[i], i, spec, cfg);
  });
  std::vector<LabeledInstance> out;
  for (auto& rows : per_paper)
    for (auto& row : rows) out.push_back(std::move(row));
  Rng rng = MakeRng(spec.seed, kShuffleStream);
  Shuffle(out, rng);
  return out;
}

int ExtendedBodyPositives(int top_k, int body, int highlights) {
  if (body <= highlights) return 0;
  return std::min(top_k, (body - highlights) / 2);
}

DatasetSplit BuildCsPubSumExt(const std::vector<Paper>& papers, const DatasetSpec& spec,
                              const RougeConfig& cfg, int jobs) {
  ValidateSpec(spec);
  auto per_paper = ParallelMap(papers.size(), jobs, [&](size_t i) {
    const Paper& paper = papers[i];
    const auto scored = ScoreBodySentences(paper, cfg);
    const int body = static_cast<int>(scored.size());
    const int hl = std::min(static_cast<int>(paper.highlights.size()), body);
    const int top = ExtendedBodyPositives(spec.top_k_positives, body, hl);
    const size_t total = static_cast<size_t>(hl + top);

    const Tokens gold = Concatenate(paper.highlights);
    std::vector<LabeledInstance> positives;
    for (int h = 0; h < hl; ++h) positives.push_back(FromHighlight(paper, h, gold, cfg));
    for (int j = 0; j < top; ++j) positives.push_back(FromBody(paper, scored[j], 1));

    // Everything not taken as a positive, lowest score first.
    auto rest = Ascending(std::vector<ScoredSentence>(scored.begin() + top, scored.end()));
    Rng rng = MakeRng(spec.seed, i);
    std::vector<LabeledInstance> negatives;
    if (spec.negative_shuffle) {
      const size_t pool = std::max(total, PoolSize(spec.negative_pool_fraction, scored.size()));
      for (size_t idx : SampleWithoutReplacement(std::min(pool, rest.size()), total, rng))
        negatives.push_back(FromBody(paper, rest[idx], 0));
    } else {
      for (size_t j = 0; j < total; ++j) negatives.push_back(FromBody(paper, rest[j], 0));
    }

    Shuffle(positives, rng);
    Shuffle(negatives, rng);
    const size_t n_train = static_cast<size_t>(
        std::llround(spec.train_fraction_ext * static_cast<double>(total)));
    DatasetSplit split;
    for (size_t j = 0; j < total; ++j) {
      auto& dst = j < n_train ? split.train : split.test;
      dst.push_back(std::move(positives[j]));
      dst.push_back(std::move(negatives[j]));
    }
    return split;
  });

  DatasetSplit out;
  for (auto& split : per_paper) {
    for (auto& row : split.train) out.train.push_back(std::move(row));
    for (auto& row : split.test) out.test.push_back(std::move(row));
  }
  Rng train_rng = MakeRng(spec.seed, kShuffleStream);
  Shuffle(out.train, train_rng);
  Rng test_rng = MakeRng(spec.seed, kTestShuffleStream);
  Shuffle(out.test, test_rng);
  return out;
}

// --- serialization -----------------------------------------------------------

std::string InstanceToJson(const LabeledInstance& instance) {
  json obj;
  obj["paper_id"] = instance.paper_id;
  obj["section_index"] = instance.section_index;
  obj["index_in_section"] = instance.sentence.index_in_section;
  obj["location"] = std::string(CategoryName(instance.location));
  obj["label"] = instance.label;
  obj["rouge_vs_highlights"] = instance.rouge_vs_highlights;
  obj["text"] = instance.sentence.raw_text;
  return obj.dump();
}

LabeledInstance ParseInstanceJson(std::string_view line, size_t line_number) {
  const std::string where = "dataset line " + std::to_string(line_number) + ": ";
  json obj;
  try {
    obj = json::parse(line);
    LabeledInstance inst;
    inst.paper_id = obj.at("paper_id").get<std::string>();
    inst.section_index = obj.at("section_index").get<int>();
    const auto location = ParseCategoryName(obj.at("location").get<std::string>());
    if (!location) throw Error(where + "unknown location");
    inst.location = *location;
    inst.label = obj.at("label").get<int>();
    if (inst.label != 0 && inst.label != 1) throw Error(where + "label must be 0 or 1");
    inst.rouge_vs_highlights = obj.at("rouge_vs_highlights").get<double>();
    inst.sentence = Sentence::FromText(obj.at("text").get<std::string>(),
                                       obj.at("index_in_section").get<int>());
    return inst;
  } catch (const json::exception& e) {
    throw Error(where + e.what());
  }
}

void WriteDataset(std::ostream& out, const std::vector<LabeledInstance>& instances) {
  for (const auto& inst : instances) out << InstanceToJson(inst) << '\n';
}

std::vector<LabeledInstance> ReadDataset(std::istream& in) {
  std::vector<LabeledInstance> out;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    out.push_back(ParseInstanceJson(line, n));
  }
  return out;
}

void SaveDataset(const std::string& path, const std::vector<LabeledInstance>& instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset file '" + path + "'");
  WriteDataset(out, instances);
}

std::vector<LabeledInstance> LoadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file '" + path + "'");
  return ReadDataset(in);
}

}  // namespace pubsum
