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

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace pubsum {
namespace {

constexpr const char* kCheckpointMagic = "pubsum-checkpoint v1";
constexpr std::string_view kArchNames[] = {"fnet", "word2vec", "word2vecaf",
                                           "snet", "sfnet",    "safnet"};

void AppendDouble(std::string& out, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

double ParseDouble(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error("checkpoint: bad number '" + std::string(text) + "'");
  return v;
}

// Splits on single spaces.
std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (start <= line.size()) {
    size_t end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

void WriteMatrix(std::ostream& out, const Eigen::MatrixXd& m) {
  std::string line;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) line.push_back(' ');
      AppendDouble(line, m(i, j));
    }
    out << line << '\n';
  }
}

void ReadMatrix(std::istream& in, Eigen::MatrixXd& m, const std::string& name) {
  std::string line;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!std::getline(in, line)) throw Error("checkpoint: truncated parameter '" + name + "'");
    const auto fields = Fields(line);
    if (static_cast<Eigen::Index>(fields.size()) != m.cols())
      throw Error("checkpoint: parameter '" + name + "' row " + std::to_string(i) + " has " +
                  std::to_string(fields.size()) + " values, expected " + std::to_string(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = ParseDouble(fields[j]);
  }
}

std::string Expect(std::istream& in, std::string_view key) {
  std::string line;
  if (!std::getline(in, line)) throw Error("checkpoint: missing '" + std::string(key) + "'");
  if (line.rfind(std::string(key) + " ", 0) != 0)
    throw Error("checkpoint: expected '" + std::string(key) + "', got '" + line + "'");
  return line.substr(key.size() + 1);
}

}  // namespace

std::string_view ArchitectureName(Architecture arch) {
  return kArchNames[static_cast<int>(arch)];
}

std::optional<Architecture> ParseArchitecture(std::string_view name) {
  for (int i = 0; i < 6; ++i)
    if (kArchNames[i] == name) return static_cast<Architecture>(i);
  return std::nullopt;
}

InputNeeds NeedsOf(Architecture arch) {
  switch (arch) {
    case Architecture::kFNet: return {false, false, true, false};
    case Architecture::kWord2Vec: return {false, false, false, true};
    case Architecture::kWord2VecAF: return {false, true, true, true};
    case Architecture::kSNet: return {true, false, false, false};
    case Architecture::kSFNet: return {true, false, true, false};
    case Architecture::kSAFNet: return {true, true, true, false};
  }
  return {};
}

// --- Summariser --------------------------------------------------------------

struct Summariser::State {
  nn::BiLstm<double>::Cache lstm;
  Eigen::VectorXd encoded;
  Eigen::VectorXd x;
  Eigen::VectorXd hidden_pre;
  Eigen::VectorXd sentence_pre, abstract_pre, feature_pre;
  nn::DropoutMask<double> drop;
  Eigen::VectorXd concat;
};

Summariser::Summariser(Architecture arch, ModelDims dims, uint64_t seed)
    : arch_(arch), dims_(dims) {
  if (dims.embedding <= 0 || dims.lstm_hidden <= 0 || dims.hidden <= 0 || dims.features <= 0)
    throw Error("model: dimensions must be positive");
  const int h = dims.hidden;
  Rng rng = MakeRng(seed, 0x1417ULL);
  int concat = 0;
  switch (arch) {
    case Architecture::kFNet:
      hidden_ = nn::Dense<double>(params_, "hidden", dims.features, h);
      concat = h;
      break;
    case Architecture::kWord2Vec:
      hidden_ = nn::Dense<double>(params_, "hidden", dims.embedding, h);
      concat = h;
      break;
    case Architecture::kWord2VecAF:
      hidden_ = nn::Dense<double>(params_, "hidden", 2 * dims.embedding + dims.features, h);
      concat = h;
      break;
    case Architecture::kSNet:
      lstm_ = nn::BiLstm<double>(params_, "lstm", dims.embedding, dims.lstm_hidden);
      concat = 2 * dims.lstm_hidden;
      break;
    case Architecture::kSFNet:
    case Architecture::kSAFNet:
      lstm_ = nn::BiLstm<double>(params_, "lstm", dims.embedding, dims.lstm_hidden);
      sentence_ = nn::Dense<double>(params_, "sentence", 2 * dims.lstm_hidden, h);
      concat = 2 * h;
      if (arch == Architecture::kSAFNet) {
        abstract_ = nn::Dense<double>(params_, "abstract", dims.embedding, h);
        concat += h;
      }
      feature_ = nn::Dense<double>(params_, "feature", dims.features, h);
      break;
  }
  output_ = nn::Dense<double>(params_, "output", concat, 2);

  const InputNeeds needs = NeedsOf(arch);
  if (needs.sequence) lstm_.Initialize(rng);
  if (arch == Architecture::kFNet || arch == Architecture::kWord2Vec ||
      arch == Architecture::kWord2VecAF)
    hidden_.Initialize(rng);
  if (arch == Architecture::kSFNet || arch == Architecture::kSAFNet) {
    sentence_.Initialize(rng);
    if (arch == Architecture::kSAFNet) abstract_.Initialize(rng);
    feature_.Initialize(rng);
  }
  output_.Initialize(rng);
}

void Summariser::CheckInput(const ModelInput& input) const {
  const InputNeeds needs = NeedsOf(arch_);
  auto missing = [&](const char* what) {
    throw Error(std::string(ArchitectureName(arch_)) + ": missing input " + what);
  };
  if (needs.sequence && !input.sequence) missing("S (sentence token vectors)");
  if (needs.abstract && !input.abstract) missing("A (abstract vector)");
  if (needs.features && !input.features) missing("F (features)");
  if (needs.sentence_vector && !input.sentence_vector) missing("Word2Vec (sentence vector)");
  if (needs.sequence && input.sequence->cols() == 0)
    throw Error(std::string(ArchitectureName(arch_)) + ": empty sentence");
}

Eigen::VectorXd Summariser::Forward(const ModelInput& input, Rng* rng, double drop,
                                    State* state) const {
  CheckInput(input);
  State local;
  State& s = state ? *state : local;
  const int h = dims_.hidden;
  auto sample_drop = [&](Eigen::Index n) {
    s.drop = rng ? nn::DropoutMask<double>::Sample(n, drop, *rng) : nn::DropoutMask<double>{};
  };
  switch (arch_) {
    case Architecture::kFNet:
    case Architecture::kWord2Vec:
    case Architecture::kWord2VecAF: {
      if (arch_ == Architecture::kFNet) {
        s.x = *input.features;
      } else if (arch_ == Architecture::kWord2Vec) {
        s.x = *input.sentence_vector;
      } else {
        s.x.resize(input.sentence_vector->size() + input.abstract->size() + input.features->size());
        s.x << *input.sentence_vector, *input.abstract, *input.features;
      }
      s.hidden_pre = hidden_.Forward(s.x);
      s.concat = nn::ReluForward<double>(s.hidden_pre);
      if (arch_ == Architecture::kFNet) {
        sample_drop(s.concat.size());
        s.concat = s.drop.Apply(s.concat);
      } else {
        s.drop = {};
      }
      break;
    }
    case Architecture::kSNet:
      s.encoded = lstm_.Forward(*input.sequence, state ? &s.lstm : nullptr);
      sample_drop(s.encoded.size());
      s.concat = s.drop.Apply(s.encoded);
      break;
    case Architecture::kSFNet:
    case Architecture::kSAFNet: {
      s.encoded = lstm_.Forward(*input.sequence, state ? &s.lstm : nullptr);
      s.sentence_pre = sentence_.Forward(s.encoded);
      sample_drop(h);
      const Eigen::VectorXd sentence = s.drop.Apply(nn::ReluForward<double>(s.sentence_pre));
      s.feature_pre = feature_.Forward(*input.features);
      const Eigen::VectorXd feature = nn::ReluForward<double>(s.feature_pre);
      if (arch_ == Architecture::kSAFNet) {
        s.abstract_pre = abstract_.Forward(*input.abstract);
        s.concat.resize(3 * h);
        s.concat << sentence, nn::ReluForward<double>(s.abstract_pre), feature;
      } else {
        s.concat.resize(2 * h);
        s.concat << sentence, feature;
      }
      break;
    }
  }
  return output_.Forward(s.concat);
}

void Summariser::Backward(const ModelInput& input, const State& s, const Eigen::VectorXd& d_logits) {
  const Eigen::VectorXd d_concat = output_.Backward(s.concat, d_logits);
  const int h = dims_.hidden;
  switch (arch_) {
    case Architecture::kFNet:
    case Architecture::kWord2Vec:
    case Architecture::kWord2VecAF: {
      const Eigen::VectorXd d_act = s.drop.Backward(d_concat);
      hidden_.Backward(s.x, nn::ReluBackward<double>(s.hidden_pre, d_act));
      break;
    }
    case Architecture::kSNet:
      lstm_.Backward(s.lstm, s.drop.Backward(d_concat));
      break;
    case Architecture::kSFNet:
    case Architecture::kSAFNet: {
      const Eigen::VectorXd d_sentence =
          nn::ReluBackward<double>(s.sentence_pre, s.drop.Backward(d_concat.head(h)));
      lstm_.Backward(s.lstm, sentence_.Backward(s.encoded, d_sentence));
      if (arch_ == Architecture::kSAFNet)
        abstract_.Backward(*input.abstract,
                           nn::ReluBackward<double>(s.abstract_pre, d_concat.segment(h, h)));
      feature_.Backward(*input.features,
                        nn::ReluBackward<double>(s.feature_pre, d_concat.tail(h)));
      break;
    }
  }
}

Eigen::VectorXd Summariser::Logits(const ModelInput& input, Rng* dropout_rng,
                                   double drop_probability) const {
  return Forward(input, dropout_rng, drop_probability, nullptr);
}

double Summariser::Probability(const ModelInput& input) const {
  return nn::Softmax<double>(Logits(input))[1];
}

double Summariser::AccumulateGradient(const ModelInput& input, int label, Rng* dropout_rng,
                                      double drop_probability) {
  State state;
  const Eigen::VectorXd logits = Forward(input, dropout_rng, drop_probability, &state);
  const auto loss = nn::SoftmaxCrossEntropy<double>(logits, label);
  Backward(input, state, loss.grad);
  return loss.loss;
}

double Summariser::Loss(const ModelInput& input, int label) const {
  return nn::SoftmaxCrossEntropy<double>(Logits(input), label).loss;
}

Eigen::VectorXd Summariser::PrepareFeatures(const FeatureVector& raw) const {
  FeatureVector z = normalizer_.Transform(raw);
  for (int i = 0; i < kNumFeatures; ++i)
    if (!feature_mask_.test(i)) z[i] = 0.0;
  return z;
}

void Summariser::Save(std::ostream& out) const {
  out << kCheckpointMagic << '\n';
  out << "architecture " << ArchitectureName(arch_) << '\n';
  out << "dims embedding=" << dims_.embedding << " lstm_hidden=" << dims_.lstm_hidden
      << " hidden=" << dims_.hidden << " features=" << dims_.features << '\n';
  std::string mask;
  for (int i = 0; i < kNumFeatures; ++i) mask.push_back(feature_mask_.test(i) ? '1' : '0');
  out << "feature_mask " << mask << '\n';
  out << "normalizer " << (normalizer_.fitted() ? 1 : 0) << '\n';
  if (normalizer_.fitted()) {
    WriteMatrix(out, normalizer_.mean().transpose());
    WriteMatrix(out, normalizer_.stddev().transpose());
  }
  out << "parameters " << params_.size() << '\n';
  for (size_t i = 0; i < params_.size(); ++i) {
    const auto& p = params_[i];
    out << "param " << p.name << ' ' << p.value.rows() << ' ' << p.value.cols() << '\n';
    WriteMatrix(out, p.value);
  }
  out << "end\n";
}

Summariser Summariser::Load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic)
    throw Error("checkpoint: unrecognised header");
  const std::string arch_name = Expect(in, "architecture");
  const auto arch = ParseArchitecture(arch_name);
  if (!arch) throw Error("checkpoint: unknown architecture '" + arch_name + "'");
  ModelDims dims;
  const std::string dims_line = Expect(in, "dims");
  for (auto field : Fields(dims_line)) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw Error("checkpoint: malformed dims");
    const int value = static_cast<int>(ParseDouble(field.substr(eq + 1)));
    const auto key = field.substr(0, eq);
    if (key == "embedding") dims.embedding = value;
    else if (key == "lstm_hidden") dims.lstm_hidden = value;
    else if (key == "hidden") dims.hidden = value;
    else if (key == "features") dims.features = value;
    else throw Error("checkpoint: unknown dim '" + std::string(key) + "'");
  }
  Summariser model(*arch, dims, 0);
  const std::string mask = Expect(in, "feature_mask");
  if (mask.size() != kNumFeatures) throw Error("checkpoint: malformed feature_mask");
  for (int i = 0; i < kNumFeatures; ++i) model.feature_mask_.set(i, mask[i] == '1');
  if (Expect(in, "normalizer") == "1") {
    Eigen::MatrixXd mean(1, kNumFeatures), stddev(1, kNumFeatures);
    ReadMatrix(in, mean, "normalizer.mean");
    ReadMatrix(in, stddev, "normalizer.stddev");
    model.normalizer_ = FeatureNormalizer(mean.transpose(), stddev.transpose());
  }
  const size_t count = std::stoul(Expect(in, "parameters"));
  if (count != model.params_.size())
    throw Error("checkpoint: expected " + std::to_string(model.params_.size()) +
                " parameters for " + arch_name + ", found " + std::to_string(count));
  for (size_t i = 0; i < count; ++i) {
    const std::string header = Expect(in, "param");
    const auto fields = Fields(header);
    if (fields.size() != 3) throw Error("checkpoint: malformed param header");
    const std::string name(fields[0]);
    auto* p = model.params_.Find(name);
    if (!p) throw Error("checkpoint: unexpected parameter '" + name + "'");
    const auto rows = static_cast<Eigen::Index>(ParseDouble(fields[1]));
    const auto cols = static_cast<Eigen::Index>(ParseDouble(fields[2]));
    if (rows != p->value.rows() || cols != p->value.cols())
      throw Error("checkpoint: parameter '" + name + "' is " + nn::ShapeString(rows, cols) +
                  ", expected " + nn::ShapeString(p->value.rows(), p->value.cols()));
    ReadMatrix(in, p->value, name);
  }
  if (!std::getline(in, line) || line != "end") throw Error("checkpoint: missing end marker");
  return model;
}

void Summariser::SaveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  Save(out);
}

Summariser Summariser::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint '" + path + "'");
  return Load(in);
}

// --- ensembles ---------------------------------------------------------------

double Ensemble(double p1, double p2, double c) {
  if (!(c >= -1.0 && c <= 1.0)) throw Error("ensemble: C must be in [-1, 1]");
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
    throw Error("ensemble: probabilities must be in [0, 1]");
  return (p1 * (1.0 - c) + p2 * (1.0 + c)) / 2.0;
}

std::vector<double> EnsembleWeightGrid() {
  std::vector<double> grid;
  for (int i = -20; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

double TuneEnsembleWeight(const std::function<double(double)>& objective) {
  double best_c = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double c : EnsembleWeightGrid()) {
    const double v = objective(c);
    if (v > best) {
      best = v;
      best_c = c;
    }
  }
  return best_c;
}

std::string EnsembleConfig::ToJson() const {
  nlohmann::ordered_json obj;
  obj["c"] = c;
  obj["s1"] = std::string(ArchitectureName(s1));
  obj["s2"] = std::string(ArchitectureName(s2));
  return obj.dump();
}

EnsembleConfig EnsembleConfig::FromJson(std::string_view text) {
  try {
    const auto obj = nlohmann::json::parse(text);
    EnsembleConfig cfg;
    cfg.c = obj.at("c").get<double>();
    const auto s1 = ParseArchitecture(obj.at("s1").get<std::string>());
    const auto s2 = ParseArchitecture(obj.at("s2").get<std::string>());
    if (!s1 || !s2) throw Error("ensemble config: unknown model id");
    cfg.s1 = *s1;
    cfg.s2 = *s2;
    if (!(cfg.c >= -1.0 && cfg.c <= 1.0)) throw Error("ensemble config: c must be in [-1, 1]");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("ensemble config: ") + e.what());
  }
}

void EnsembleConfig::SaveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write ensemble config '" + path + "'");
  out << ToJson() << '\n';
}

EnsembleConfig EnsembleConfig::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ensemble config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJson(buf.str());
}

// --- single-feature summarisers ----------------------------------------------

void RequireRankableFeature(FeatureId id) {
  if (id == FeatureId::kSentenceLength || id == FeatureId::kNumericCount ||
      id == FeatureId::kLocation)
    throw Error("feature '" + std::string(FeatureName(id)) +
                "' cannot rank sentences: SentenceLength, NumericCount and Location are excluded "
                "for lack of granularity");
}

double SingleFeatureScore(const SentenceFeatures& features, FeatureId id) {
  RequireRankableFeature(id);
  return features.Get(id);
}

// --- encoding and training ---------------------------------------------------

PaperEncoder::PaperEncoder(const Paper& paper, const EncodingResources& resources)
    : paper_(&paper), resources_(&resources), context_(paper) {
  if (!resources.stats) throw Error("encoder: corpus statistics are required");
  if (resources.embeddings)
    abstract_vector_ =
        AbstractVector(paper.abstract, *resources.embeddings, resources.stats->stopwords());
}

SentenceFeatures PaperEncoder::RawFeatures(const Tokens& sentence, LocationCategory location) const {
  return ExtractFeatures(sentence, location, context_, *resources_->stats,
                         resources_->feature_config);
}

ModelInput PaperEncoder::Encode(const Summariser& model, const Tokens& sentence,
                                LocationCategory location) const {
  return Encode(model, sentence, RawFeatures(sentence, location));
}

ModelInput PaperEncoder::Encode(const Summariser& model, const Tokens& sentence,
                                const SentenceFeatures& raw) const {
  const InputNeeds needs = NeedsOf(model.arch());
  const EmbeddingTable* table = resources_->embeddings;
  const bool uses_table = needs.sequence || needs.abstract || needs.sentence_vector;
  if (uses_table && !table)
    throw Error(std::string(ArchitectureName(model.arch())) + ": word embeddings are required");
  if (uses_table && table->dim() != model.dims().embedding)
    throw Error("embedding dimension " + std::to_string(table->dim()) +
                " does not match model input " + std::to_string(model.dims().embedding));
  ModelInput input;
  if (needs.sequence) input.sequence = TokenSequence(sentence, *table);
  if (needs.abstract) input.abstract = abstract_vector_;
  if (needs.features) input.features = model.PrepareFeatures(raw.ToVector());
  if (needs.sentence_vector)
    input.sentence_vector = SentenceVector(sentence, *table, resources_->stats->stopwords());
  return input;
}

namespace {

class EncoderCache {
 public:
  EncoderCache(const std::vector<Paper>& papers, const EncodingResources& resources)
      : resources_(resources) {
    for (const auto& p : papers) papers_[p.id] = &p;
  }

  const PaperEncoder& Get(const std::string& paper_id) {
    auto it = encoders_.find(paper_id);
    if (it != encoders_.end()) return *it->second;
    auto paper = papers_.find(paper_id);
    if (paper == papers_.end()) throw Error("instance refers to unknown paper '" + paper_id + "'");
    auto enc = std::make_unique<PaperEncoder>(*paper->second, resources_);
    return *encoders_.emplace(paper_id, std::move(enc)).first->second;
  }

 private:
  const EncodingResources& resources_;
  std::unordered_map<std::string, const Paper*> papers_;
  std::unordered_map<std::string, std::unique_ptr<PaperEncoder>> encoders_;
};

}  // namespace

TrainedSummariser TrainSummariser(Architecture arch, const std::vector<Paper>& papers,
                                  const std::vector<LabeledInstance>& instances,
                                  const EncodingResources& resources, const nn::TrainConfig& cfg,
                                  const ModelDims& dims, FeatureMask mask) {
  if (instances.empty()) throw Error("train: no instances");
  EncoderCache encoders(papers, resources);
  std::vector<SentenceFeatures> raw;
  raw.reserve(instances.size());
  std::vector<FeatureVector> rows;
  for (const auto& inst : instances) {
    raw.push_back(encoders.Get(inst.paper_id).RawFeatures(inst.sentence.tokens, inst.location));
    rows.push_back(raw.back().ToVector());
  }
  TrainedSummariser out{Summariser(arch, dims, cfg.seed), {}};
  Summariser& model = out.model;
  model.set_normalizer(FeatureNormalizer::Fit(rows));
  model.set_feature_mask(mask);

  std::vector<ModelInput> inputs;
  inputs.reserve(instances.size());
  for (size_t i = 0; i < instances.size(); ++i)
    inputs.push_back(
        encoders.Get(instances[i].paper_id).Encode(model, instances[i].sentence.tokens, raw[i]));

  const auto dev = nn::DevIndices(instances.size(), cfg.dev_fraction, cfg.seed);
  std::vector<size_t> train;
  {
    size_t d = 0;
    for (size_t i = 0; i < instances.size(); ++i) {
      if (d < dev.size() && dev[d] == i) {
        ++d;
        continue;
      }
      train.push_back(i);
    }
  }
  out.history = nn::Train<double>(
      model.params(), train.size(),
      [&](size_t i, Rng& rng) {
        return model.AccumulateGradient(inputs[train[i]], instances[train[i]].label, &rng,
                                        cfg.dropout);
      },
      dev.size(), [&](size_t i) { return model.Loss(inputs[dev[i]], instances[dev[i]].label); },
      cfg);
  return out;
}

std::vector<double> ScoreBody(const Summariser& model, const Paper& paper,
                              const EncodingResources& resources) {
  PaperEncoder encoder(paper, resources);
  std::vector<double> out;
  for (const auto& ref : BodySentences(paper)) {
    out.push_back(model.Probability(
        encoder.Encode(model, At(paper, ref).tokens, paper.sections[ref.section].category)));
  }
  return out;
}

std::vector<SentenceFeatures> BodyFeatures(const Paper& paper, const EncodingResources& resources) {
  PaperEncoder encoder(paper, resources);
  std::vector<SentenceFeatures> out;
  for (const auto& ref : BodySentences(paper))
    out.push_back(encoder.RawFeatures(At(paper, ref).tokens, paper.sections[ref.section].category));
  return out;
}

std::vector<double> PredictInstances(const Summariser& model, const std::vector<Paper>& papers,
                                     const std::vector<LabeledInstance>& instances,
                                     const EncodingResources& resources) {
  EncoderCache encoders(papers, resources);
  std::vector<double> out;
  out.reserve(instances.size());
  for (const auto& inst : instances)
    out.push_back(model.Probability(
        encoders.Get(inst.paper_id).Encode(model, inst.sentence.tokens, inst.location)));
  return out;
}

}  // namespace pubsum
