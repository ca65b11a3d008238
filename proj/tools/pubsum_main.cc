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

// Batch command-line front end.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pubsum/baselines.h"
#include "pubsum/corpus.h"
#include "pubsum/dataset.h"
#include "pubsum/embeddings.h"
#include "pubsum/error.h"
#include "pubsum/evaluation.h"
#include "pubsum/features.h"
#include "pubsum/fixtures.h"
#include "pubsum/models.h"
#include "pubsum/parallel.h"
#include "pubsum/stopwords.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace pubsum {
namespace {

// Bad flag values found after parsing; exits like a parse error.
struct UsageError : Error {
  using Error::Error;
};

constexpr const char* kToolVersion = "pubsum 1.0.0";

// Reads nested JSON objects as CLI11 config sections:
// {"jobs": 2, "dataset": {"build": {"seed": 3}}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json root;
    try {
      input >> root;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!root.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    Walk(root, {}, items);
    return items;
  }

 private:
  static std::string Scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void Walk(const nlohmann::json& obj, const std::vector<std::string>& parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        Walk(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

// Buffers every output so nothing is written unless the whole command
// succeeds.
class Outputs {
 public:
  void Add(const std::string& path, std::string content) {
    files_.emplace_back(path, std::move(content));
  }
  std::vector<std::string> Paths() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }
  void Commit() const {
    for (const auto& [path, content] : files_) {
      fs::path p(path);
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      std::string tmp = path + ".tmp";
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error("cannot write '" + path + "'");
      out << content;
      out.close();
      if (!out) throw Error("failed writing '" + path + "'");
    }
    for (const auto& [path, content] : files_) fs::rename(path + ".tmp", path);
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Run {
  std::string command;
  const CLI::App* app = nullptr;
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::optional<uint64_t> seed;
  std::vector<std::string> inputs;
  Outputs outputs;
  json extra = json::object();

  void Finish(const std::string& manifest_path);
};

json OptionSnapshot(const CLI::App* app) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "version" || name.empty()) continue;
    if (opt->count() > 0) {
      auto results = opt->results();
      if (results.size() == 1 && opt->get_items_expected_max() <= 1) {
        out[name] = results.front();
      } else {
        out[name] = results;
      }
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

void Run::Finish(const std::string& manifest_path) {
  json m;
  m["command"] = command;
  m["argv"] = argv;
  json config = json::object();
  for (const CLI::App* a = app; a != nullptr; a = a->get_parent()) {
    json snapshot = OptionSnapshot(a);
    for (auto& [k, v] : snapshot.items()) {
      if (!config.contains(k)) config[k] = v;
    }
  }
  m["config"] = config;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["inputs"] = inputs;
  m["outputs"] = outputs.Paths();
  m["tool_version"] = kToolVersion;
  for (auto& [k, v] : extra.items()) m[k] = v;
  m["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  outputs.Add(manifest_path, m.dump(2) + "\n");
  outputs.Commit();
}

void RequireFile(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw Error(what + " '" + path + "' does not exist");
}

void RequireDirectory(const std::string& path, const std::string& what) {
  if (!fs::is_directory(path)) throw Error(what + " '" + path + "' is not a directory");
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::vector<std::string> kArchNames = {"fnet", "word2vec", "word2vecaf",
                                             "snet", "sfnet",    "safnet"};

// --- registry ------------------------------------------------------------------

std::string CheckpointPath(const std::string& registry, Architecture arch) {
  return (fs::path(registry) / (std::string(ArchitectureName(arch)) + ".ckpt")).string();
}
std::string StatsPath(const std::string& registry) {
  return (fs::path(registry) / "corpus_stats.txt").string();
}
std::string EmbeddingsPath(const std::string& registry) {
  return (fs::path(registry) / "embeddings.txt").string();
}
std::string FeatureConfigPath(const std::string& registry) {
  return (fs::path(registry) / "features.json").string();
}
std::string EnsemblePath(const std::string& registry, const EnsembleConfig& e) {
  return (fs::path(registry) / (std::string(ArchitectureName(e.s1)) + "+" +
                                std::string(ArchitectureName(e.s2)) + ".json"))
      .string();
}

std::string FeatureConfigJson(const FeatureConfig& fc) {
  json j;
  j["rouge_beta"] = fc.rouge.beta;
  j["idf_smoothing"] = fc.idf_smoothing;
  j["title_count_types"] = fc.title_count_types;
  return j.dump(2) + "\n";
}

FeatureConfig LoadFeatureConfig(const std::string& path) {
  try {
    auto j = nlohmann::json::parse(ReadText(path));
    FeatureConfig fc;
    fc.rouge.beta = j.at("rouge_beta").get<double>();
    fc.idf_smoothing = j.at("idf_smoothing").get<double>();
    fc.title_count_types = j.at("title_count_types").get<bool>();
    return fc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("feature config '" + path + "': " + e.what());
  }
}

struct Registry {
  std::string dir;
  std::map<Architecture, Summariser> models;
  std::optional<EmbeddingTable> embeddings;
  std::optional<CorpusStats> stats;
  FeatureConfig feature_config;
  std::vector<EnsembleConfig> ensembles;

  EncodingResources Encoding() const {
    return {embeddings ? &*embeddings : nullptr, stats ? &*stats : nullptr, feature_config};
  }
};

// Model architectures a method needs.
std::vector<Architecture> ModelsFor(const std::string& method) {
  if (auto a = ParseArchitecture(method)) return {*a};
  if (method == "saf+f") return {Architecture::kSAFNet, Architecture::kFNet};
  if (method == "s+f") return {Architecture::kSNet, Architecture::kFNet};
  return {};
}

bool NeedsRegistry(const std::string& method) {
  return !ModelsFor(method).empty() || method == "ensemble" || method.rfind("feature:", 0) == 0;
}

void ValidateMethod(const std::string& method) {
  auto known = KnownMethodNames();
  if (std::find(known.begin(), known.end(), method) != known.end()) return;
  if (method.rfind("feature:", 0) == 0) {
    auto id = ParseFeatureName(method.substr(8));
    if (!id) throw UsageError("unknown feature in method '" + method + "'");
    try {
      RequireRankableFeature(*id);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return;
  }
  std::string list;
  for (const auto& m : known) list += (list.empty() ? "" : ", ") + m;
  throw UsageError("unknown method '" + method + "' (valid: " + list + ")");
}

Registry LoadRegistry(const std::string& dir, const std::set<Architecture>& archs,
                      bool ensembles, Run& run) {
  Registry r;
  r.dir = dir;
  RequireDirectory(dir, "model registry");
  std::string fc = FeatureConfigPath(dir);
  if (fs::exists(fc)) {
    r.feature_config = LoadFeatureConfig(fc);
    run.inputs.push_back(fc);
  }
  if (fs::exists(StatsPath(dir))) {
    r.stats = CorpusStats::LoadFile(StatsPath(dir));
    run.inputs.push_back(StatsPath(dir));
  }
  bool need_embeddings = false;
  for (Architecture a : archs) {
    std::string path = CheckpointPath(dir, a);
    if (!fs::exists(path)) {
      throw Error("model registry '" + dir + "' has no " + std::string(ArchitectureName(a)) +
                  " checkpoint; run 'model train --arch " + std::string(ArchitectureName(a)) +
                  "' first");
    }
    r.models.emplace(a, Summariser::LoadFile(path));
    run.inputs.push_back(path);
    auto needs = NeedsOf(a);
    need_embeddings |= needs.sequence || needs.abstract || needs.sentence_vector;
  }
  if (need_embeddings) {
    RequireFile(EmbeddingsPath(dir), "embedding table");
    r.embeddings = EmbeddingTable::LoadFile(EmbeddingsPath(dir));
    run.inputs.push_back(EmbeddingsPath(dir));
  }
  if (ensembles) {
    for (auto e : {EnsembleConfig::SafPlusF(), EnsembleConfig::SPlusF()}) {
      std::string path = EnsemblePath(dir, e);
      if (fs::exists(path)) {
        r.ensembles.push_back(EnsembleConfig::LoadFile(path));
        run.inputs.push_back(path);
      }
    }
  }
  return r;
}

std::vector<Paper> LoadPapers(const std::string& path, Run& run) {
  RequireFile(path, "corpus");
  run.inputs.push_back(path);
  auto papers = LoadCorpus(path);
  if (papers.empty()) throw Error("corpus '" + path + "' holds no papers");
  return papers;
}

// --- commands ----------------------------------------------------------------

struct FixturesOptions {
  int papers = 50;
  uint64_t seed = 1;
  double copy_probability = FixtureConfig().copy_probability;
  std::string out;
};

void RunFixtures(const FixturesOptions& o, Run& run) {
  if (o.papers <= 0) throw Error("--papers must be positive, got " + std::to_string(o.papers));
  FixtureConfig cfg;
  cfg.papers = o.papers;
  cfg.seed = o.seed;
  cfg.copy_probability = o.copy_probability;
  run.seed = o.seed;
  std::ostringstream out;
  WriteCorpus(out, GenerateFixtureCorpus(cfg));
  run.outputs.Add(o.out, out.str());
  run.Finish(o.out + ".manifest.json");
}

struct DatasetOptions {
  std::string corpus;
  std::string variant;
  std::string out_dir;
  int top_k = 20;
  double neg_fraction = 0.10;
  uint64_t seed = 0;
  double train_fraction = 2.0 / 3.0;
  bool negative_shuffle = false;
  double rouge_beta = 1.0;
};

void RunDataset(const DatasetOptions& o, int jobs, Run& run) {
  if (o.top_k < 0) throw Error("--top-k must be non-negative");
  if (!(o.neg_fraction > 0.0 && o.neg_fraction <= 1.0)) throw Error("--neg-fraction must lie in (0, 1]");
  if (!(o.train_fraction > 0.0 && o.train_fraction < 1.0)) throw Error("--train-fraction must lie in (0, 1)");
  auto papers = LoadPapers(o.corpus, run);
  DatasetSpec spec;
  spec.top_k_positives = o.top_k;
  spec.negative_pool_fraction = o.neg_fraction;
  spec.seed = o.seed;
  spec.train_fraction_ext = o.train_fraction;
  spec.negative_shuffle = o.negative_shuffle;
  RougeConfig rouge{o.rouge_beta};
  run.seed = o.seed;
  auto dump = [](const std::vector<LabeledInstance>& v) {
    std::ostringstream s;
    WriteDataset(s, v);
    return s.str();
  };
  fs::path dir(o.out_dir);
  if (o.variant == "cspubsum") {
    auto instances = BuildCsPubSum(papers, spec, rouge, jobs);
    run.outputs.Add((dir / "instances.jsonl").string(), dump(instances));
    run.extra["instances"] = instances.size();
  } else {
    auto split = BuildCsPubSumExt(papers, spec, rouge, jobs);
    run.outputs.Add((dir / "train.jsonl").string(), dump(split.train));
    run.outputs.Add((dir / "test.jsonl").string(), dump(split.test));
    run.extra["train_instances"] = split.train.size();
    run.extra["test_instances"] = split.test.size();
  }
  run.Finish((dir / "manifest.json").string());
}

struct EmbeddingOptions {
  std::string corpus;
  std::string out;
  SkipGramConfig cfg;
};

void RunEmbeddings(const EmbeddingOptions& o, Run& run) {
  auto papers = LoadPapers(o.corpus, run);
  run.seed = o.cfg.seed;
  auto table = TrainSkipGram(CorpusSentences(papers), o.cfg);
  std::ostringstream out;
  table.Save(out);
  run.outputs.Add(o.out, out.str());
  run.extra["vocabulary"] = table.size();
  run.Finish(o.out + ".manifest.json");
}

struct ModelOptions {
  std::string arch;
  std::string corpus;
  std::string train;
  std::string registry;
  std::string embeddings;
  uint64_t seed = 0;
  int epochs = 30;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::string optimizer = "adam";
  double dropout = 0.5;
  int patience = 3;
  double dev_fraction = 0.05;
  std::vector<std::string> drop_features;
  double idf_smoothing = 0.0;
  bool title_types = false;
  double rouge_beta = 1.0;
  int hidden = 100;
  int lstm_hidden = 128;
};

void RunModelTrain(const ModelOptions& o, Run& run) {
  Architecture arch = *ParseArchitecture(o.arch);
  FeatureMask mask = AllFeatures();
  for (const auto& name : o.drop_features) {
    auto id = ParseFeatureName(name);
    if (!id) throw Error("unknown feature '" + name + "' in --drop-feature");
    mask.reset(static_cast<size_t>(*id));
  }
  if (o.epochs <= 0 || o.batch_size <= 0 || o.patience < 0) {
    throw Error("--epochs and --batch-size must be positive, --patience non-negative");
  }
  if (!(o.dropout >= 0.0 && o.dropout < 1.0)) throw Error("--dropout must lie in [0, 1)");
  if (!(o.dev_fraction >= 0.0 && o.dev_fraction < 1.0)) throw Error("--dev-fraction must lie in [0, 1)");
  auto needs = NeedsOf(arch);
  bool needs_embeddings = needs.sequence || needs.abstract || needs.sentence_vector;
  if (needs_embeddings && o.embeddings.empty()) {
    throw Error("--arch " + o.arch + " needs --embeddings");
  }
  if (!o.embeddings.empty()) RequireFile(o.embeddings, "embedding table");
  RequireFile(o.train, "training instances");
  auto papers = LoadPapers(o.corpus, run);
  run.inputs.push_back(o.train);
  auto instances = LoadDataset(o.train);
  if (instances.empty()) throw Error("training set '" + o.train + "' is empty");

  std::optional<EmbeddingTable> table;
  if (!o.embeddings.empty()) {
    run.inputs.push_back(o.embeddings);
    table = EmbeddingTable::LoadFile(o.embeddings);
  }
  CorpusStats stats = CorpusStats::Build(papers, StopwordSet::FromEnvironment());
  FeatureConfig fc;
  fc.rouge.beta = o.rouge_beta;
  fc.idf_smoothing = o.idf_smoothing;
  fc.title_count_types = o.title_types;
  EncodingResources enc{table ? &*table : nullptr, &stats, fc};

  nn::TrainConfig tc;
  tc.seed = o.seed;
  tc.max_epochs = o.epochs;
  tc.batch_size = o.batch_size;
  tc.learning_rate = o.learning_rate;
  tc.optimizer = o.optimizer == "sgd" ? nn::OptimizerKind::kSgd : nn::OptimizerKind::kAdam;
  tc.dropout = o.dropout;
  tc.patience = o.patience;
  tc.dev_fraction = o.dev_fraction;
  run.seed = o.seed;
  ModelDims dims;
  dims.hidden = o.hidden;
  dims.lstm_hidden = o.lstm_hidden;
  if (table) dims.embedding = table->dim();

  auto trained = TrainSummariser(arch, papers, instances, enc, tc, dims, mask);

  std::ostringstream ckpt, st;
  trained.model.Save(ckpt);
  stats.Save(st);
  run.outputs.Add(CheckpointPath(o.registry, arch), ckpt.str());
  run.outputs.Add(StatsPath(o.registry), st.str());
  run.outputs.Add(FeatureConfigPath(o.registry), FeatureConfigJson(fc));
  if (table) {
    std::ostringstream e;
    table->Save(e);
    run.outputs.Add(EmbeddingsPath(o.registry), e.str());
  }
  json history;
  history["train_loss"] = trained.history.train_loss;
  history["dev_loss"] = trained.history.dev_loss;
  history["best_epoch"] = trained.history.best_epoch;
  run.extra["history"] = history;
  run.Finish((fs::path(o.registry) / (o.arch + ".manifest.json")).string());
}

// Body scores of both ensemble members for every paper.
void EnsembleMemberScores(const Registry& reg, const EnsembleConfig& pair,
                          const std::vector<Paper>& papers, int jobs,
                          std::vector<std::vector<double>>& p1,
                          std::vector<std::vector<double>>& p2) {
  const Summariser& m1 = reg.models.at(pair.s1);
  const Summariser& m2 = reg.models.at(pair.s2);
  EncodingResources enc = reg.Encoding();
  p1 = ParallelMap(papers.size(), jobs, [&](size_t i) { return ScoreBody(m1, papers[i], enc); });
  p2 = ParallelMap(papers.size(), jobs, [&](size_t i) { return ScoreBody(m2, papers[i], enc); });
}

EnsembleConfig PairFor(const std::string& name) {
  if (name == "saf+f") return EnsembleConfig::SafPlusF();
  if (name == "s+f") return EnsembleConfig::SPlusF();
  throw Error("unknown ensemble pair '" + name + "' (valid: saf+f, s+f)");
}

struct EnsembleOptions {
  std::string registry;
  std::string corpus;
  std::string pair = "saf+f";
  int k = 10;
  double rouge_beta = 1.0;
};

void RunEnsembleTune(const EnsembleOptions& o, int jobs, Run& run) {
  if (o.k <= 0) throw Error("--k must be positive");
  EnsembleConfig pair = PairFor(o.pair);
  Registry reg = LoadRegistry(o.registry, {pair.s1, pair.s2}, false, run);
  auto papers = LoadPapers(o.corpus, run);
  std::vector<std::vector<double>> p1, p2;
  EnsembleMemberScores(reg, pair, papers, jobs, p1, p2);
  pair.c = TuneEnsembleOnPapers(papers, p1, p2, o.k, RougeConfig{o.rouge_beta});
  std::string path = EnsemblePath(o.registry, pair);
  run.outputs.Add(path, pair.ToJson() + "\n");
  run.extra["c"] = pair.c;
  std::printf("%s c=%.2f\n", o.pair.c_str(), pair.c);
  run.Finish(path.substr(0, path.size() - 5) + ".manifest.json");
}

struct SummariseOptions {
  std::string corpus;
  std::string method;
  int k = 10;
  std::string registry;
  std::string out;
  double rouge_beta = 1.0;
};

MethodResources ResourcesFor(const Registry* reg, double rouge_beta) {
  MethodResources r;
  r.rouge.beta = rouge_beta;
  if (reg != nullptr) {
    for (const auto& [a, m] : reg->models) r.models[a] = &m;
    r.ensembles = reg->ensembles;
    r.encoding = reg->Encoding();
    if (reg->stats) r.stopwords = &reg->stats->stopwords();
  }
  return r;
}

std::vector<SummaryResult> Summarise(const std::vector<Paper>& papers, const std::string& method,
                                     int k, const MethodResources& base, int jobs,
                                     std::vector<std::string>& warnings) {
  auto results = ParallelMap(papers.size(), jobs, [&](size_t i) {
    MethodResources r = base;
    std::vector<std::string> local;
    r.warnings = &local;
    Selector sel = MakeSelector(method, r);
    return std::make_pair(MakeSummary(papers[i], sel(papers[i], k), method, k, r.rouge), local);
  });
  std::vector<SummaryResult> out;
  for (auto& [s, w] : results) {
    out.push_back(std::move(s));
    for (auto& msg : w) warnings.push_back(papers[out.size() - 1].id + ": " + msg);
  }
  return out;
}

json SummaryJson(const Paper& paper, const SummaryResult& s) {
  json j;
  j["paper_id"] = s.paper_id;
  j["method"] = s.method;
  j["k"] = s.k;
  json sel = json::array();
  for (const BodyRef& r : s.selected) {
    sel.push_back({{"section_index", r.section},
                   {"index_in_section", r.sentence},
                   {"text", At(paper, r).raw_text}});
  }
  j["selected"] = sel;
  j["rouge"] = {{"precision", s.rouge.precision}, {"recall", s.rouge.recall},
                {"f_score", s.rouge.f_score}};
  return j;
}

std::set<Architecture> ArchsFor(const std::vector<std::string>& methods) {
  std::set<Architecture> out;
  for (const auto& m : methods) {
    for (Architecture a : ModelsFor(m)) out.insert(a);
  }
  return out;
}

void RunSummarise(const SummariseOptions& o, int jobs, Run& run) {
  if (o.k <= 0) throw Error("--k must be positive, got " + std::to_string(o.k));
  ValidateMethod(o.method);
  std::optional<Registry> reg;
  if (NeedsRegistry(o.method) && o.registry.empty()) {
    throw Error("method '" + o.method + "' needs --registry");
  }
  if (o.method == "ensemble" && !o.registry.empty()) {
    // resolved below once the registry's ensemble files are known
  }
  auto papers = LoadPapers(o.corpus, run);
  if (!o.registry.empty()) {
    std::set<Architecture> archs = ArchsFor({o.method});
    reg = LoadRegistry(o.registry, archs, true, run);
    if (o.method == "ensemble") {
      if (reg->ensembles.empty()) throw Error("registry has no tuned ensemble; run 'ensemble tune'");
      archs = {reg->ensembles.front().s1, reg->ensembles.front().s2};
      reg = LoadRegistry(o.registry, archs, true, run);
    }
  }
  MethodResources res = ResourcesFor(reg ? &*reg : nullptr, o.rouge_beta);
  std::vector<std::string> warnings;
  auto summaries = Summarise(papers, o.method, o.k, res, jobs, warnings);
  std::string text;
  for (size_t i = 0; i < papers.size(); ++i) text += SummaryJson(papers[i], summaries[i]).dump() + "\n";
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  run.outputs.Add(o.out, text);
  run.extra["mean_f"] = MeanRouge(summaries).f_score;
  run.extra["warnings"] = warnings;
  run.Finish(o.out + ".manifest.json");
}

struct EvaluateOptions {
  std::string corpus;
  std::vector<std::string> methods;
  int k = 10;
  std::string registry;
  std::string instances;
  std::string instances_corpus;
  double rouge_beta = 1.0;
  bool tune_on_test = false;
  bool welch = false;
  std::string out_dir;
};

void RunEvaluate(const EvaluateOptions& o, int jobs, Run& run) {
  if (o.k <= 0) throw Error("--k must be positive, got " + std::to_string(o.k));
  for (const auto& m : o.methods) {
    ValidateMethod(m);
    if (NeedsRegistry(m) && o.registry.empty()) throw Error("method '" + m + "' needs --registry");
  }
  if (!o.instances.empty()) RequireFile(o.instances, "test instances");
  if (!o.instances_corpus.empty()) RequireFile(o.instances_corpus, "instance corpus");
  auto papers = LoadPapers(o.corpus, run);
  RougeConfig rouge{o.rouge_beta};

  std::optional<Registry> reg;
  if (!o.registry.empty()) {
    std::set<Architecture> archs = ArchsFor(o.methods);
    bool wants_ensemble = std::find(o.methods.begin(), o.methods.end(), "ensemble") != o.methods.end();
    reg = LoadRegistry(o.registry, archs, true, run);
    if (wants_ensemble) {
      if (reg->ensembles.empty()) throw Error("registry has no tuned ensemble; run 'ensemble tune'");
      archs.insert(reg->ensembles.front().s1);
      archs.insert(reg->ensembles.front().s2);
      reg = LoadRegistry(o.registry, archs, true, run);
    }
    json tuned = json::object();
    for (const auto& m : o.methods) {
      if (m != "saf+f" && m != "s+f") continue;
      EnsembleConfig pair = PairFor(m);
      if (o.tune_on_test) {
        std::vector<std::vector<double>> p1, p2;
        EnsembleMemberScores(*reg, pair, papers, jobs, p1, p2);
        pair.c = TuneEnsembleOnPapers(papers, p1, p2, o.k, rouge);
        std::erase_if(reg->ensembles, [&](const EnsembleConfig& e) {
          return e.s1 == pair.s1 && e.s2 == pair.s2;
        });
        reg->ensembles.insert(reg->ensembles.begin(), pair);
        tuned[m] = pair.c;
      } else {
        bool found = false;
        for (const auto& e : reg->ensembles) found |= e.s1 == pair.s1 && e.s2 == pair.s2;
        if (!found) {
          throw Error("method '" + m + "' has no tuned weight in the registry; run 'ensemble tune "
                      "--pair " + m + "' or pass --tune-on-test");
        }
      }
    }
    run.extra["tuned_on_test"] = tuned;
  }
  MethodResources res = ResourcesFor(reg ? &*reg : nullptr, o.rouge_beta);

  std::vector<std::string> warnings;
  std::vector<MethodReport> reports;
  for (const auto& m : o.methods) {
    MethodReport rep;
    rep.method = m;
    rep.k = o.k;
    rep.summaries = Summarise(papers, m, o.k, res, jobs, warnings);
    reports.push_back(std::move(rep));
  }
  auto oracle_f = ParallelMap(papers.size(), jobs, [&](size_t i) {
    std::vector<std::vector<BodyRef>> bounds;
    for (const auto& rep : reports) bounds.push_back(rep.summaries[i].selected);
    return OracleSummary(papers[i], o.k, rouge, bounds).rouge.f_score;
  });
  for (auto& rep : reports) rep.oracle_f = oracle_f;

  if (!o.instances.empty()) {
    run.inputs.push_back(o.instances);
    auto instances = LoadDataset(o.instances);
    std::vector<Paper> inst_papers =
        o.instances_corpus.empty() ? papers : LoadPapers(o.instances_corpus, run);
    std::vector<int> labels;
    for (const auto& inst : instances) labels.push_back(inst.label);
    EncodingResources enc = reg ? reg->Encoding() : EncodingResources{};
    for (auto& rep : reports) {
      auto archs = ModelsFor(rep.method);
      if (archs.empty()) continue;
      std::vector<double> p = PredictInstances(reg->models.at(archs[0]), inst_papers, instances, enc);
      if (archs.size() == 2) {
        std::vector<double> p2 =
            PredictInstances(reg->models.at(archs[1]), inst_papers, instances, enc);
        double c = 0.0;
        for (const auto& e : reg->ensembles) {
          if (e.s1 == archs[0] && e.s2 == archs[1]) {
            c = e.c;
            break;
          }
        }
        p = EnsembleScores(p, p2, c);
      }
      rep.accuracy = EvaluateAccuracy(p, labels);
    }
  }

  fs::path dir(o.out_dir);
  std::ostringstream csv;
  WritePerPaperCsv(csv, reports);
  run.outputs.Add((dir / "per_paper.csv").string(), csv.str());
  run.outputs.Add((dir / "summary.json").string(), ReportJson(reports, o.welch) + "\n");
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  run.extra["warnings"] = warnings;
  std::printf("%-24s %8s %10s %9s\n", "method", "mean_f", "oracle_%", "accuracy");
  for (const auto& rep : reports) {
    std::printf("%-24s %8.4f %10.2f ", rep.method.c_str(), rep.MeanF(), rep.OraclePct());
    if (rep.accuracy) {
      std::printf("%9.4f\n", *rep.accuracy);
    } else {
      std::printf("%9s\n", "-");
    }
  }
  run.Finish((dir / "manifest.json").string());
}

struct SectionsOptions {
  std::string corpus;
  std::string out;
  std::optional<double> copy_threshold;
  double rouge_beta = 1.0;
};

void RunSections(const SectionsOptions& o, Run& run) {
  if (o.copy_threshold && !(*o.copy_threshold > 0.0 && *o.copy_threshold <= 1.0)) {
    throw Error("--copy-threshold must lie in (0, 1]");
  }
  auto papers = LoadPapers(o.corpus, run);
  RougeConfig rouge{o.rouge_beta};
  auto means = SectionRougeAnalysis(papers, rouge);
  CopyPasteOptions cp;
  cp.rouge_threshold = o.copy_threshold;
  cp.rouge = rouge;
  auto copies = CopyPasteAnalysis(papers, cp);

  json j;
  json sr = json::array();
  for (const auto& m : means) {
    sr.push_back({{"category", m.category}, {"mean_f", m.mean_f}, {"sentences", m.sentences}});
  }
  j["section_rouge"] = sr;
  json counts = json::object(), shares = json::object();
  for (LocationCategory c : kAllLocationCategories) {
    std::string name(CategoryName(c));
    counts[name] = copies.counts[static_cast<size_t>(c)];
    if (copies.shares) shares[name] = (*copies.shares)[static_cast<size_t>(c)];
  }
  j["copy_paste"] = {{"mode", o.copy_threshold ? "rouge_threshold" : "exact"},
                     {"counts", counts},
                     {"shares", copies.shares ? shares : json(nullptr)}};
  // Correlation of per-category ROUGE with copy/paste share over body
  // categories present in both.
  std::vector<double> x, y;
  if (copies.shares) {
    for (const auto& m : means) {
      auto cat = ParseCategoryName(m.category);
      if (!cat || *cat == LocationCategory::kAbstract || *cat == LocationCategory::kHighlight) continue;
      x.push_back(m.mean_f);
      y.push_back((*copies.shares)[static_cast<size_t>(*cat)]);
    }
  }
  json r = nullptr;
  if (x.size() >= 3) {
    try {
      r = PearsonR(x, y);
    } catch (const Error& e) {
      copies.warnings.push_back(std::string("correlation skipped: ") + e.what());
    }
  }
  j["pearson_r"] = r;
  j["warnings"] = copies.warnings;
  for (const auto& w : copies.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  run.outputs.Add(o.out, j.dump(2) + "\n");
  run.Finish(o.out + ".manifest.json");
}

struct FeaturesOptions {
  std::string corpus;
  std::string registry;
  std::string out;
  double idf_smoothing = 0.0;
  bool title_types = false;
  double rouge_beta = 1.0;
};

void RunFeatures(const FeaturesOptions& o, Run& run) {
  auto papers = LoadPapers(o.corpus, run);
  std::optional<Registry> reg;
  FeatureConfig fc;
  fc.rouge.beta = o.rouge_beta;
  fc.idf_smoothing = o.idf_smoothing;
  fc.title_count_types = o.title_types;
  CorpusStats stats;
  if (!o.registry.empty()) {
    reg = LoadRegistry(o.registry, {}, false, run);
    if (!reg->stats) throw Error("registry '" + o.registry + "' has no corpus statistics");
    stats = *reg->stats;
    fc = reg->feature_config;
  } else {
    stats = CorpusStats::Build(papers, StopwordSet::FromEnvironment());
  }
  EncodingResources enc{nullptr, &stats, fc};
  std::vector<std::string> ids;
  std::vector<SentenceFeatures> rows;
  for (const Paper& p : papers) {
    auto body = BodySentences(p);
    auto feats = BodyFeatures(p, enc);
    for (size_t i = 0; i < body.size(); ++i) {
      ids.push_back(p.id + ":" + std::to_string(body[i].section) + ":" +
                    std::to_string(body[i].sentence));
      rows.push_back(feats[i]);
    }
  }
  std::ostringstream out;
  WriteFeatureCsv(out, ids, rows);
  run.outputs.Add(o.out, out.str());
  run.Finish(o.out + ".manifest.json");
}

int Main(int argc, char** argv) {
  CLI::App app{"Extractive summarisation of scientific papers.", "pubsum"};
  app.set_version_flag("--version", kToolVersion);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file of option values (flags take precedence)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for per-paper work")->check(CLI::PositiveNumber);

  Run run;
  for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);
  std::function<void()> action;
  auto bind = [&](CLI::App* sub, std::string name, std::function<void()> fn) {
    sub->callback([&run, &action, sub, name, fn] {
      run.command = name;
      run.app = sub;
      action = fn;
    });
  };

  // fixtures
  auto* fixtures = app.add_subcommand("fixtures", "Synthetic corpora")->require_subcommand(1);
  FixturesOptions fx;
  auto* fx_gen = fixtures->add_subcommand("generate", "Write a synthetic corpus");
  fx_gen->add_option("--papers", fx.papers, "Number of papers")->check(CLI::PositiveNumber);
  fx_gen->add_option("--seed", fx.seed, "Generator seed");
  fx_gen->add_option("--copy-probability", fx.copy_probability,
                     "Chance a highlight is copied verbatim into the body")
      ->check(CLI::Range(0.0, 1.0));
  fx_gen->add_option("--out", fx.out, "Output corpus JSONL")->required();
  bind(fx_gen, "fixtures generate", [&] { RunFixtures(fx, run); });

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Labeled sentence datasets")->require_subcommand(1);
  DatasetOptions ds;
  auto* ds_build = dataset->add_subcommand("build", "Build a labeled dataset from a corpus");
  ds_build->add_option("--corpus", ds.corpus, "Corpus JSONL")->required();
  ds_build->add_option("--variant", ds.variant, "Dataset variant")
      ->required()
      ->check(CLI::IsMember({"cspubsum", "cspubsumext"}));
  ds_build->add_option("--out-dir", ds.out_dir, "Output directory")->required();
  ds_build->add_option("--top-k", ds.top_k, "Body positives per paper (extended variant)");
  ds_build->add_option("--neg-fraction", ds.neg_fraction, "Bottom fraction for negatives");
  ds_build->add_option("--seed", ds.seed, "Sampling seed");
  ds_build->add_option("--train-fraction", ds.train_fraction, "Train share (extended variant)");
  ds_build->add_flag("--negative-shuffle", ds.negative_shuffle,
                     "Draw extended-variant negatives at random from the bottom pool");
  ds_build->add_option("--rouge-beta", ds.rouge_beta, "ROUGE-L beta")->check(CLI::PositiveNumber);
  bind(ds_build, "dataset build", [&] { RunDataset(ds, jobs, run); });

  // embeddings
  auto* embeddings = app.add_subcommand("embeddings", "Word vectors")->require_subcommand(1);
  EmbeddingOptions em;
  auto* em_train = embeddings->add_subcommand("train", "Train skip-gram vectors on a corpus");
  em_train->add_option("--corpus", em.corpus, "Corpus JSONL")->required();
  em_train->add_option("--out", em.out, "Output embedding table")->required();
  em_train->add_option("--dim", em.cfg.dim)->check(CLI::PositiveNumber);
  em_train->add_option("--min-count", em.cfg.min_count)->check(CLI::PositiveNumber);
  em_train->add_option("--window", em.cfg.window)->check(CLI::PositiveNumber);
  em_train->add_option("--negatives", em.cfg.negative)->check(CLI::PositiveNumber);
  em_train->add_option("--epochs", em.cfg.epochs)->check(CLI::PositiveNumber);
  em_train->add_option("--learning-rate", em.cfg.learning_rate)->check(CLI::PositiveNumber);
  em_train->add_option("--downsample", em.cfg.downsample)->check(CLI::NonNegativeNumber);
  em_train->add_option("--seed", em.cfg.seed);
  em_train->add_option("--threads", em.cfg.threads, "More than 1 is not deterministic")
      ->check(CLI::PositiveNumber);
  bind(em_train, "embeddings train", [&] { RunEmbeddings(em, run); });

  // model
  auto* model = app.add_subcommand("model", "Neural summarisers")->require_subcommand(1);
  ModelOptions mo;
  auto* mo_train = model->add_subcommand("train", "Train one architecture into a registry");
  mo_train->add_option("--arch", mo.arch, "Architecture")->required()->check(CLI::IsMember(kArchNames));
  mo_train->add_option("--corpus", mo.corpus, "Corpus the instances come from")->required();
  mo_train->add_option("--train", mo.train, "Training instances JSONL")->required();
  mo_train->add_option("--registry", mo.registry, "Model registry directory")->required();
  mo_train->add_option("--embeddings", mo.embeddings, "Embedding table");
  mo_train->add_option("--seed", mo.seed);
  mo_train->add_option("--epochs", mo.epochs, "Maximum epochs");
  mo_train->add_option("--batch-size", mo.batch_size);
  mo_train->add_option("--learning-rate", mo.learning_rate)->check(CLI::PositiveNumber);
  mo_train->add_option("--optimizer", mo.optimizer)->check(CLI::IsMember({"adam", "sgd"}));
  mo_train->add_option("--dropout", mo.dropout, "Drop probability");
  mo_train->add_option("--patience", mo.patience, "Early-stopping patience in epochs");
  mo_train->add_option("--dev-fraction", mo.dev_fraction, "Held-out share for early stopping");
  mo_train->add_option("--drop-feature", mo.drop_features, "Feature to zero out (repeatable)");
  mo_train->add_option("--idf-smoothing", mo.idf_smoothing)->check(CLI::NonNegativeNumber);
  mo_train->add_flag("--title-types", mo.title_types, "Count distinct title words");
  mo_train->add_option("--rouge-beta", mo.rouge_beta)->check(CLI::PositiveNumber);
  mo_train->add_option("--hidden", mo.hidden)->check(CLI::PositiveNumber);
  mo_train->add_option("--lstm-hidden", mo.lstm_hidden)->check(CLI::PositiveNumber);
  bind(mo_train, "model train", [&] { RunModelTrain(mo, run); });

  // ensemble
  auto* ensemble = app.add_subcommand("ensemble", "Model ensembles")->require_subcommand(1);
  EnsembleOptions en;
  auto* en_tune = ensemble->add_subcommand("tune", "Grid-search the ensemble weight C");
  en_tune->add_option("--registry", en.registry)->required();
  en_tune->add_option("--corpus", en.corpus, "Validation corpus")->required();
  en_tune->add_option("--pair", en.pair)->check(CLI::IsMember({"saf+f", "s+f"}));
  en_tune->add_option("--k", en.k, "Summary length")->check(CLI::PositiveNumber);
  en_tune->add_option("--rouge-beta", en.rouge_beta)->check(CLI::PositiveNumber);
  bind(en_tune, "ensemble tune", [&] { RunEnsembleTune(en, jobs, run); });

  // summarise
  SummariseOptions su;
  auto* summarise = app.add_subcommand("summarise", "Write extractive summaries");
  summarise->add_option("--corpus", su.corpus)->required();
  summarise->add_option("--method", su.method, "Method id")->required();
  summarise->add_option("--k", su.k, "Sentences per summary");
  summarise->add_option("--registry", su.registry, "Model registry directory");
  summarise->add_option("--out", su.out, "Output JSONL")->required();
  summarise->add_option("--rouge-beta", su.rouge_beta)->check(CLI::PositiveNumber);
  bind(summarise, "summarise", [&] { RunSummarise(su, jobs, run); });

  // evaluate
  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score methods against the highlights");
  evaluate->add_option("--corpus", ev.corpus)->required();
  evaluate->add_option("--methods", ev.methods, "Method ids")->required()->delimiter(',');
  evaluate->add_option("--k", ev.k, "Sentences per summary");
  evaluate->add_option("--registry", ev.registry);
  evaluate->add_option("--instances", ev.instances, "Labeled test instances for accuracy");
  evaluate->add_option("--instances-corpus", ev.instances_corpus,
                       "Corpus of the instances (defaults to --corpus)");
  evaluate->add_option("--rouge-beta", ev.rouge_beta)->check(CLI::PositiveNumber);
  evaluate->add_flag("--tune-on-test", ev.tune_on_test, "Tune ensemble weights on this corpus");
  evaluate->add_flag("--welch", ev.welch, "Welch t-test instead of pooled variance");
  evaluate->add_option("--out-dir", ev.out_dir)->required();
  bind(evaluate, "evaluate", [&] { RunEvaluate(ev, jobs, run); });

  // analyse
  auto* analyse = app.add_subcommand("analyse", "Corpus analyses")->require_subcommand(1);
  SectionsOptions se;
  auto* sections = analyse->add_subcommand("sections", "Per-section ROUGE and copy/paste counts");
  sections->add_option("--corpus", se.corpus)->required();
  sections->add_option("--out", se.out, "Output JSON")->required();
  sections->add_option("--copy-threshold", se.copy_threshold,
                       "Count a copy when ROUGE-L f reaches this value");
  sections->add_option("--rouge-beta", se.rouge_beta)->check(CLI::PositiveNumber);
  bind(sections, "analyse sections", [&] { RunSections(se, run); });

  // features
  auto* features = app.add_subcommand("features", "Sentence features")->require_subcommand(1);
  FeaturesOptions fe;
  auto* fe_dump = features->add_subcommand("dump", "Raw features of every body sentence as CSV");
  fe_dump->add_option("--corpus", fe.corpus)->required();
  fe_dump->add_option("--registry", fe.registry, "Use the registry's statistics and settings");
  fe_dump->add_option("--out", fe.out, "Output CSV")->required();
  fe_dump->add_option("--idf-smoothing", fe.idf_smoothing)->check(CLI::NonNegativeNumber);
  fe_dump->add_flag("--title-types", fe.title_types);
  fe_dump->add_option("--rouge-beta", fe.rouge_beta)->check(CLI::PositiveNumber);
  bind(fe_dump, "features dump", [&] { RunFeatures(fe, run); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 2;
  }
  if (!action) {
    std::fprintf(stderr, "error: no command given\n");
    return 2;
  }
  try {
    action();
  } catch (const UsageError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 2;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace pubsum

int main(int argc, char** argv) { return pubsum::Main(argc, argv); }
