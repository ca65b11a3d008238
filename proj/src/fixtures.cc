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

#include <cctype>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>

#include "pubsum/error.h"
#include "pubsum/random.h"

namespace pubsum {
namespace {

using Words = std::vector<std::string>;

const Words kAdjectives = {"scalable", "robust", "sparse", "adaptive", "efficient", "hierarchical",
                           "probabilistic", "incremental", "distributed", "lightweight",
                           "contrastive", "modular"};
const Words kMethods = {"graph kernel", "attention network", "decision forest", "hashing scheme",
                        "sampling strategy", "caching layer", "query planner", "topic model",
                        "ranking function", "compression codec", "scheduling policy",
                        "embedding model"};
const Words kTasks = {"entity resolution", "code search", "traffic prediction", "image retrieval",
                      "fault localisation", "malware detection", "query optimisation",
                      "speech tagging", "protein folding", "load balancing", "link prediction",
                      "citation recommendation"};
const Words kObjects = {"feature drift", "label noise", "memory locality", "cache misses",
                        "gradient variance", "node degree", "query latency", "user feedback",
                        "class imbalance", "token overlap", "energy usage", "edge density",
                        "signal sparsity", "model capacity", "data skew", "thread contention"};
const Words kMetrics = {"accuracy", "recall", "throughput", "precision", "coverage", "f1 score"};
const Words kDatasets = {"wikitables", "citeseer", "imagenet", "cora", "movielens", "trec",
                         "gigaword", "ogbn", "stackoverflow", "pubmed"};
const Words kBaselines = {"logistic regression", "random walks", "linear probing",
                          "greedy search", "static heuristics", "manual tuning"};
const Words kCosts = {"the runtime", "the memory footprint", "the training time",
                      "the communication cost", "the storage overhead"};
const Words kAssumptions = {"mild smoothness", "bounded noise", "independent sampling",
                            "stationary inputs"};

const Words kCues = {"In this work", "In summary", "Overall", "Specifically", "Notably",
                     "As a result", "Importantly"};
const Words kTails = {"in practice", "across all settings", "in our experiments",
                      "on every benchmark", ""};
const Words kPartialPrefix = {"We observe that", "It is worth noting that", "This suggests that",
                              "Further inspection shows that"};
const Words kPartialSuffix = {"for several configurations", "when the data is sparse",
                              "in most runs", "under moderate load"};

const Words kMathNouns = {"matrix", "vector", "kernel", "tensor", "gradient", "operator",
                          "partition", "lattice", "polynomial", "residual"};
const Words kVars = {"x", "y", "z", "w", "u", "v", "alpha", "beta", "lambda", "theta"};
const Words kParams = {"learning rate", "batch size", "window", "margin", "temperature",
                       "step size", "decay", "threshold"};
const Words kAuthors = {"Smith", "Chen", "Garcia", "Novak", "Okafor", "Ivanova", "Tanaka",
                        "Dubois", "Kumar", "Larsen"};

// Synonym swaps used to paraphrase.
const std::vector<std::pair<std::string, std::string>> kSynonyms = {
    {"propose", "introduce"}, {"improves", "raises"},    {"show", "demonstrate"},
    {"reveals", "indicates"}, {"release", "publish"},    {"reduces", "lowers"},
    {"links", "connects"},    {"outperforms", "beats"}, {"analysis", "study"},
    {"approach", "method"},
};

const std::string& Pick(const Words& words, Rng& rng) { return words[UniformIndex(rng, words.size())]; }

int Between(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(UniformIndex(rng, static_cast<uint64_t>(hi - lo + 1)));
}

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string Number(Rng& rng) {
  char buf[32];
  if (UniformUnit(rng) < 0.5) {
    std::snprintf(buf, sizeof(buf), "%d", Between(rng, 2, 512));
  } else {
    std::snprintf(buf, sizeof(buf), "%d.%d", Between(rng, 0, 99), Between(rng, 1, 9));
  }
  return buf;
}

Words SplitWords(const std::string& text) {
  Words out;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string JoinWords(const Words& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::string StripPeriod(std::string s) {
  while (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

struct Topic {
  std::string adjective, method, task, obj1, obj2, metric, dataset, baseline, cost, assumption;
};

Topic DrawTopic(Rng& rng) {
  Topic t;
  t.adjective = Pick(kAdjectives, rng);
  t.method = Pick(kMethods, rng);
  t.task = Pick(kTasks, rng);
  t.obj1 = Pick(kObjects, rng);
  do {
    t.obj2 = Pick(kObjects, rng);
  } while (t.obj2 == t.obj1);
  t.metric = Pick(kMetrics, rng);
  t.dataset = Pick(kDatasets, rng);
  t.baseline = Pick(kBaselines, rng);
  t.cost = Pick(kCosts, rng);
  t.assumption = Pick(kAssumptions, rng);
  return t;
}

std::string HighlightText(int templ, const Topic& t, Rng& rng) {
  switch (templ) {
    case 0: return "We propose a " + t.adjective + " " + t.method + " for " + t.task + ".";
    case 1:
      return "The " + t.method + " improves " + t.metric + " by " + std::to_string(Between(rng, 3, 40)) +
             " percent on " + t.dataset + ".";
    case 2:
      return "Experiments on " + t.dataset + " show that modelling " + t.obj1 + " outperforms " +
             t.baseline + ".";
    case 3: return "Our analysis reveals that " + t.obj1 + " drives " + t.obj2 + " in " + t.task + ".";
    case 4: return "We release an open " + t.obj2 + " benchmark for " + t.task + ".";
    case 5:
      return "The approach reduces " + t.cost + " of " + t.obj1 + " without loss of " + t.metric + ".";
    default:
      return "A theoretical bound links " + t.obj1 + " and " + t.obj2 + " under " + t.assumption + ".";
  }
}
constexpr int kNumTemplates = 7;

std::string Paraphrase(const std::string& highlight, Rng& rng) {
  Words words = SplitWords(StripPeriod(highlight));
  if (!words.empty()) {
    words[0][0] = static_cast<char>(std::tolower(static_cast<unsigned char>(words[0][0])));
  }
  for (auto& w : words) {
    for (const auto& [from, to] : kSynonyms) {
      if (w == from && UniformUnit(rng) < 0.5) w = to;
    }
  }
  if (words.size() > 6 && UniformUnit(rng) < 0.5) {
    words.erase(words.begin() + static_cast<long>(2 + UniformIndex(rng, words.size() - 3)));
  }
  const Words original = SplitWords(StripPeriod(highlight));
  bool changed = words.size() != original.size();
  for (size_t i = 1; !changed && i < words.size(); ++i) changed = words[i] != original[i];
  std::string body = JoinWords(words);
  std::string tail = Pick(kTails, rng);
  if (!tail.empty()) {
    body += " " + tail;
    changed = true;
  }
  // never a verbatim copy
  if (UniformUnit(rng) < 0.7 || !changed) body = Pick(kCues, rng) + " " + body;
  return Capitalize(body) + ".";
}

std::string Partial(const std::string& highlight, Rng& rng) {
  Words words = SplitWords(StripPeriod(highlight));
  for (auto& w : words) {
    for (char& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  size_t span = std::max<size_t>(2, words.size() / 2);
  size_t start = UniformIndex(rng, words.size() - span + 1);
  Words piece(words.begin() + static_cast<long>(start),
              words.begin() + static_cast<long>(start + span));
  return Pick(kPartialPrefix, rng) + " " + JoinWords(piece) + " " + Pick(kPartialSuffix, rng) + ".";
}

std::string Decoy(const Topic& t, Rng& rng) {
  switch (UniformIndex(rng, 3)) {
    case 0:
      return Pick(kCues, rng) + ", we also discuss " + Pick(kObjects, rng) + " for " +
             Pick(kTasks, rng) + ".";
    case 1:
      return "A related question is whether the " + t.method + " transfers to " + Pick(kTasks, rng) +
             ".";
    default:
      return "We leave " + Pick(kObjects, rng) + " and " + Pick(kObjects, rng) +
             " to future studies.";
  }
}

std::string MethodFiller(Rng& rng) {
  switch (UniformIndex(rng, 4)) {
    case 0:
      return "Let " + Pick(kVars, rng) + " denote the " + Pick(kMathNouns, rng) + " of the " +
             Pick(kMathNouns, rng) + " with " + Number(rng) + " entries.";
    case 1:
      return "The " + Pick(kMathNouns, rng) + " is computed as " + Pick(kVars, rng) + " = " +
             Pick(kVars, rng) + " + " + Number(rng) + " " + Pick(kVars, rng) + ".";
    case 2:
      return "We set the " + Pick(kParams, rng) + " to " + Number(rng) + " and the " +
             Pick(kParams, rng) + " to " + Number(rng) + ".";
    default:
      return "Each " + Pick(kMathNouns, rng) + " is normalised by its " + Pick(kMathNouns, rng) +
             " before the update.";
  }
}

std::string RelatedFiller(Rng& rng) {
  switch (UniformIndex(rng, 3)) {
    case 0:
      return Pick(kAuthors, rng) + " et al. (" + std::to_string(Between(rng, 1995, 2015)) +
             ") studied " + Pick(kObjects, rng) + " for " + Pick(kTasks, rng) + ".";
    case 1:
      return "Earlier work on " + Pick(kTasks, rng) + " relied on " + Pick(kBaselines, rng) + ".";
    default:
      return "Surveys by " + Pick(kAuthors, rng) + " and " + Pick(kAuthors, rng) +
             " cover older variants of " + Pick(kMethods, rng) + ".";
  }
}

std::string ResultsFiller(Rng& rng) {
  switch (UniformIndex(rng, 3)) {
    case 0:
      return "Table " + std::to_string(Between(rng, 1, 9)) + " lists " + Pick(kParams, rng) +
             " values of " + Number(rng) + " and " + Number(rng) + " for each " +
             Pick(kMathNouns, rng) + ".";
    case 1:
      return "Figure " + std::to_string(Between(rng, 1, 9)) + " plots the " +
             Pick(kMathNouns, rng) + " against the " + Pick(kParams, rng) + " over " +
             Number(rng) + " runs.";
    default:
      return "Runs used " + Number(rng) + " cores and " + Number(rng) + " GB of memory.";
  }
}

std::string GeneralFiller(FixtureSection s, Rng& rng) {
  switch (s) {
    case FixtureSection::kRelatedWork: return RelatedFiller(rng);
    case FixtureSection::kResults: return ResultsFiller(rng);
    case FixtureSection::kIntroduction:
      return UniformUnit(rng) < 0.5 ? RelatedFiller(rng) : MethodFiller(rng);
    case FixtureSection::kConclusion:
      return UniformUnit(rng) < 0.5 ? ResultsFiller(rng) : MethodFiller(rng);
    default: return MethodFiller(rng);
  }
}

size_t PickWeighted(const std::array<double, kNumFixtureSections>& weights, Rng& rng) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = UniformUnit(rng) * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  for (size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;
  }
  return 0;
}

void CheckWeights(const std::array<double, kNumFixtureSections>& w, const char* name) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw Error(std::string("fixtures: ") + name + " must be non-negative");
    total += x;
  }
  if (!(total > 0.0)) throw Error(std::string("fixtures: ") + name + " must not all be zero");
}

constexpr const char* kHeadings[kNumFixtureSections] = {
    "1. Introduction", "2. Related Work", "3. Methods", "4. Experimental Results", "5. Conclusion"};

Paper GeneratePaper(int index, const FixtureConfig& cfg, const Gazetteer& gazetteer) {
  Rng rng = MakeRng(cfg.seed, static_cast<uint64_t>(index));
  Topic topic = DrawTopic(rng);
  Paper paper;
  char id[32];
  std::snprintf(id, sizeof(id), "fixture-%04d", index);
  paper.id = id;
  paper.title = Sentence::FromText(
      Capitalize(topic.adjective) + " " + topic.method + " for " + topic.task, 0);
  paper.keywords = {topic.method, topic.task, topic.obj1};

  std::vector<int> templates(kNumTemplates);
  std::iota(templates.begin(), templates.end(), 0);
  Shuffle(templates, rng);
  int h = Between(rng, cfg.min_highlights, cfg.max_highlights);
  std::vector<std::string> highlights;
  for (int i = 0; i < h; ++i) highlights.push_back(HighlightText(templates[i], topic, rng));

  std::vector<std::string> abstract;
  abstract.push_back(Capitalize(topic.task) + " remains an open problem for practitioners.");
  for (const auto& hl : highlights) abstract.push_back(Paraphrase(hl, rng));

  std::array<std::vector<std::string>, kNumFixtureSections> body;
  for (const auto& hl : highlights) {
    if (UniformUnit(rng) < cfg.copy_probability) body[PickWeighted(cfg.copy_weights, rng)].push_back(hl);
    for (int p = 0; p < cfg.paraphrases_per_highlight; ++p) {
      body[PickWeighted(cfg.paraphrase_weights, rng)].push_back(Paraphrase(hl, rng));
    }
  }
  for (int p = 0; p < cfg.partial_sentences; ++p) {
    body[PickWeighted(cfg.paraphrase_weights, rng)].push_back(
        Partial(highlights[UniformIndex(rng, highlights.size())], rng));
  }
  for (int d = 0; d < cfg.decoy_sentences; ++d) {
    auto s = UniformUnit(rng) < 0.5 ? FixtureSection::kIntroduction : FixtureSection::kRelatedWork;
    body[static_cast<size_t>(s)].push_back(Decoy(topic, rng));
  }
  for (int s = 0; s < kNumFixtureSections; ++s) {
    int n = cfg.filler[s] + Between(rng, 0, 2);
    for (int i = 0; i < n; ++i) body[s].push_back(GeneralFiller(static_cast<FixtureSection>(s), rng));
  }

  auto to_sentences = [](const std::vector<std::string>& texts) {
    std::vector<Sentence> out;
    for (size_t i = 0; i < texts.size(); ++i) out.push_back(Sentence::FromText(texts[i], static_cast<int>(i)));
    return out;
  };
  paper.highlights = to_sentences(highlights);
  paper.abstract = to_sentences(abstract);
  for (int s = 0; s < kNumFixtureSections; ++s) {
    if (body[s].empty()) continue;
    Shuffle(body[s], rng);
    Section section;
    section.raw_heading = kHeadings[s];
    section.category = ClassifyHeading(section.raw_heading, gazetteer);
    section.sentences = to_sentences(body[s]);
    paper.sections.push_back(std::move(section));
  }
  ValidatePaper(paper);
  return paper;
}

}  // namespace

std::vector<Paper> GenerateFixtureCorpus(const FixtureConfig& cfg) {
  if (cfg.papers <= 0) throw Error("fixtures: --papers must be positive, got " + std::to_string(cfg.papers));
  if (cfg.min_highlights < 1 || cfg.max_highlights < cfg.min_highlights ||
      cfg.max_highlights > kNumTemplates) {
    throw Error("fixtures: highlight counts must satisfy 1 <= min <= max <= " +
                std::to_string(kNumTemplates));
  }
  if (!(cfg.copy_probability >= 0.0 && cfg.copy_probability <= 1.0)) {
    throw Error("fixtures: copy probability must lie in [0, 1]");
  }
  if (cfg.paraphrases_per_highlight < 0 || cfg.partial_sentences < 0 || cfg.decoy_sentences < 0) {
    throw Error("fixtures: sentence counts must be non-negative");
  }
  for (int f : cfg.filler) {
    if (f < 0) throw Error("fixtures: filler counts must be non-negative");
  }
  CheckWeights(cfg.copy_weights, "copy weights");
  CheckWeights(cfg.paraphrase_weights, "paraphrase weights");
  const Gazetteer& gazetteer = Gazetteer::Default();
  std::vector<Paper> papers;
  papers.reserve(static_cast<size_t>(cfg.papers));
  for (int i = 0; i < cfg.papers; ++i) papers.push_back(GeneratePaper(i, cfg, gazetteer));
  return papers;
}

}  // namespace pubsum
