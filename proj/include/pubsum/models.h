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

#ifndef PUBSUM_MODELS_H_
#define PUBSUM_MODELS_H_

#include <Eigen/Core>
#include <bitset>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pubsum/corpus.h"
#include "pubsum/dataset.h"
#include "pubsum/embeddings.h"
#include "pubsum/features.h"
#include "pubsum/neural.h"

namespace pubsum {

// Inputs: S = token-vector sequence, A = abstract vector, F = features,
// W = averaged sentence vector.
enum class Architecture { kFNet, kWord2Vec, kWord2VecAF, kSNet, kSFNet, kSAFNet };

inline constexpr Architecture kAllArchitectures[] = {
    Architecture::kFNet, Architecture::kWord2Vec, Architecture::kWord2VecAF,
    Architecture::kSNet, Architecture::kSFNet,    Architecture::kSAFNet,
};

// "fnet", "word2vec", "word2vecaf", "snet", "sfnet", "safnet".
std::string_view ArchitectureName(Architecture arch);
std::optional<Architecture> ParseArchitecture(std::string_view name);

struct InputNeeds {
  bool sequence = false;
  bool abstract = false;
  bool features = false;
  bool sentence_vector = false;
};
InputNeeds NeedsOf(Architecture arch);

struct ModelDims {
  int embedding = 100;
  int lstm_hidden = 128;
  int hidden = 100;  // FNet / Word2Vec hidden layer and every branch layer
  int features = kNumFeatures;
};

struct ModelInput {
  std::optional<Eigen::MatrixXd> sequence;         // embedding x length
  std::optional<Eigen::VectorXd> abstract;         // embedding
  std::optional<Eigen::VectorXd> features;         // normalized, kNumFeatures
  std::optional<Eigen::VectorXd> sentence_vector;  // embedding
};

// Which feature components a model sees; masked components are zeroed after
// normalization. Used for ablations.
using FeatureMask = std::bitset<kNumFeatures>;
inline FeatureMask AllFeatures() { return FeatureMask().set(); }

// One of the neural sentence classifiers. Outputs a two-class softmax whose
// class 1 is "summary sentence".
class Summariser {
 public:
  Summariser(Architecture arch, ModelDims dims = {}, uint64_t seed = 0);
  Summariser(Summariser&&) noexcept = default;
  Summariser& operator=(Summariser&&) noexcept = default;

  Architecture arch() const { return arch_; }
  const ModelDims& dims() const { return dims_; }
  nn::ParameterStore<double>& params() { return params_; }
  const nn::ParameterStore<double>& params() const { return params_; }

  const FeatureNormalizer& normalizer() const { return normalizer_; }
  void set_normalizer(FeatureNormalizer n) { normalizer_ = std::move(n); }
  const FeatureMask& feature_mask() const { return feature_mask_; }
  void set_feature_mask(FeatureMask m) { feature_mask_ = m; }

  // Evaluation-mode logits unless a dropout generator is supplied.
  Eigen::VectorXd Logits(const ModelInput& input, Rng* dropout_rng = nullptr,
                         double drop_probability = 0.5) const;
  // P(summary) in evaluation mode.
  double Probability(const ModelInput& input) const;
  // Adds d(loss)/d(params) for one example and returns the cross-entropy.
  double AccumulateGradient(const ModelInput& input, int label, Rng* dropout_rng = nullptr,
                            double drop_probability = 0.5);
  // Evaluation-mode loss without touching gradients.
  double Loss(const ModelInput& input, int label) const;

  // Normalizes and masks a raw feature vector.
  Eigen::VectorXd PrepareFeatures(const FeatureVector& raw) const;

  void Save(std::ostream& out) const;
  static Summariser Load(std::istream& in);
  void SaveFile(const std::string& path) const;
  static Summariser LoadFile(const std::string& path);

 private:
  struct State;
  void CheckInput(const ModelInput& input) const;
  Eigen::VectorXd Forward(const ModelInput& input, Rng* rng, double drop, State* state) const;
  void Backward(const ModelInput& input, const State& state, const Eigen::VectorXd& d_logits);

  Architecture arch_;
  ModelDims dims_;
  nn::ParameterStore<double> params_;
  nn::BiLstm<double> lstm_;
  nn::Dense<double> hidden_;    // FNet, Word2Vec, Word2VecAF
  nn::Dense<double> sentence_;  // SFNet, SAFNet LSTM branch
  nn::Dense<double> abstract_;  // SAFNet
  nn::Dense<double> feature_;   // SFNet, SAFNet
  nn::Dense<double> output_;
  FeatureNormalizer normalizer_;
  FeatureMask feature_mask_ = AllFeatures();
};

// --- ensembles ---------------------------------------------------------------

struct EnsembleConfig {
  double c = 0.0;
  Architecture s1 = Architecture::kSAFNet;
  Architecture s2 = Architecture::kFNet;

  static EnsembleConfig SafPlusF(double c = 0.0) { return {c, Architecture::kSAFNet, Architecture::kFNet}; }
  static EnsembleConfig SPlusF(double c = 0.0) { return {c, Architecture::kSNet, Architecture::kFNet}; }

  std::string ToJson() const;
  static EnsembleConfig FromJson(std::string_view text);
  void SaveFile(const std::string& path) const;
  static EnsembleConfig LoadFile(const std::string& path);
};

// (p1 (1 - c) + p2 (1 + c)) / 2. Throws unless c in [-1, 1] and both
// probabilities in [0, 1].
double Ensemble(double p1, double p2, double c);

// -1, -0.95, ..., 1.
std::vector<double> EnsembleWeightGrid();
// Grid value maximizing `objective`; the first one wins on ties.
double TuneEnsembleWeight(const std::function<double(double)>& objective);

// --- single-feature summarisers ----------------------------------------------

// Throws for SentenceLength, NumericCount and Location, which are too coarse
// to rank by.
void RequireRankableFeature(FeatureId id);
double SingleFeatureScore(const SentenceFeatures& features, FeatureId id);

// --- encoding and training ---------------------------------------------------

// Everything needed to turn a sentence in a paper into model inputs.
struct EncodingResources {
  const EmbeddingTable* embeddings = nullptr;  // required by S/A/W inputs
  const CorpusStats* stats = nullptr;
  FeatureConfig feature_config;
};

// Per-paper cache of the abstract vector and feature context.
class PaperEncoder {
 public:
  PaperEncoder(const Paper& paper, const EncodingResources& resources);

  SentenceFeatures RawFeatures(const Tokens& sentence, LocationCategory location) const;
  ModelInput Encode(const Summariser& model, const Tokens& sentence,
                    LocationCategory location) const;
  ModelInput Encode(const Summariser& model, const Tokens& sentence,
                    const SentenceFeatures& raw) const;

 private:
  const Paper* paper_;
  const EncodingResources* resources_;
  PaperContext context_;
  Eigen::VectorXd abstract_vector_;
};

struct TrainedSummariser {
  Summariser model;
  nn::TrainResult history;
};

// Fits the normalizer on `instances`, holds out cfg.dev_fraction of them for
// early stopping, and trains. Every instance's paper_id must name a paper.
TrainedSummariser TrainSummariser(Architecture arch, const std::vector<Paper>& papers,
                                  const std::vector<LabeledInstance>& instances,
                                  const EncodingResources& resources,
                                  const nn::TrainConfig& cfg, const ModelDims& dims = {},
                                  FeatureMask mask = AllFeatures());

// P(summary) for every body sentence of `paper`, in document order.
std::vector<double> ScoreBody(const Summariser& model, const Paper& paper,
                              const EncodingResources& resources);

// Raw features for every body sentence of `paper`, in document order.
std::vector<SentenceFeatures> BodyFeatures(const Paper& paper, const EncodingResources& resources);

// Predicted P(summary) for labeled instances.
std::vector<double> PredictInstances(const Summariser& model, const std::vector<Paper>& papers,
                                     const std::vector<LabeledInstance>& instances,
                                     const EncodingResources& resources);

}  // namespace pubsum

#endif  // PUBSUM_MODELS_H_
