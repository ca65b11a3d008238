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

#ifndef PUBSUM_FEATURES_H_
#define PUBSUM_FEATURES_H_

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pubsum/corpus.h"
#include "pubsum/rouge.h"
#include "pubsum/stopwords.h"

namespace pubsum {

// The eight sentence features, in vector order.
enum class FeatureId : int {
  kAbstractRouge = 0,
  kLocation = 1,
  kNumericCount = 2,
  kTitleScore = 3,
  kKeyphraseScore = 4,
  kTfIdf = 5,
  kDocTfIdf = 6,
  kSentenceLength = 7,
};

inline constexpr int kNumFeatures = 8;
using FeatureVector = Eigen::Matrix<double, kNumFeatures, 1>;

// "AbstractROUGE", "Location", "NumericCount", "TitleScore",
// "KeyphraseScore", "TFIDF", "DocTFIDF", "SentenceLength".
std::string_view FeatureName(FeatureId id);
// Case-insensitive; underscores and hyphens are ignored.
std::optional<FeatureId> ParseFeatureName(std::string_view name);

struct SentenceFeatures {
  double abstract_rouge = 0.0;
  int location = 0;
  int numeric_count = 0;
  int title_score = 0;
  int keyphrase_score = 0;
  double tf_idf = 0.0;
  double doc_tf_idf = 0.0;
  int sentence_length = 0;

  double Get(FeatureId id) const;
  FeatureVector ToVector() const;
};

struct FeatureConfig {
  RougeConfig rouge;
  // idf = ln((N + s) / (df + s)); 0 gives the plain ln(N / df).
  double idf_smoothing = 0.0;
  // Count distinct title words instead of occurrences.
  bool title_count_types = false;
};

// Background document frequencies. A paper's body text is one document.
class CorpusStats {
 public:
  CorpusStats() = default;

  static CorpusStats Build(const std::vector<Paper>& papers, const StopwordSet& stopwords);

  int num_documents() const { return num_documents_; }
  // 0 for tokens never seen.
  int DocumentFrequency(const std::string& token) const;
  // ln((N + s) / (max(df, 1) + s)).
  double Idf(const std::string& token, double smoothing = 0.0) const;
  const StopwordSet& stopwords() const { return stopwords_; }
  const std::unordered_map<std::string, int>& document_frequency() const { return df_; }

  void Save(std::ostream& out) const;
  static CorpusStats Load(std::istream& in);
  void SaveFile(const std::string& path) const;
  static CorpusStats LoadFile(const std::string& path);

 private:
  int num_documents_ = 0;
  std::unordered_map<std::string, int> df_;
  StopwordSet stopwords_;
};

// Per-paper quantities shared by every sentence of the paper.
class PaperContext {
 public:
  explicit PaperContext(const Paper& paper);

  const Paper& paper() const { return *paper_; }
  const Tokens& abstract_tokens() const { return abstract_tokens_; }
  const Tokens& title_tokens() const { return paper_->title.tokens; }
  const std::vector<Tokens>& keyphrases() const { return keyphrases_; }
  // Occurrences of `token` in the body divided by the body token count.
  double TermFrequency(const std::string& token) const;
  int NumSentences() const { return num_sentences_; }
  // Number of body sentences containing `token`.
  int SentenceFrequency(const std::string& token) const;

 private:
  const Paper* paper_;
  Tokens abstract_tokens_;
  std::vector<Tokens> keyphrases_;
  std::unordered_map<std::string, int> body_counts_;
  std::unordered_map<std::string, int> sentence_frequency_;
  size_t body_tokens_ = 0;
  int num_sentences_ = 0;
};

bool IsNumberToken(std::string_view token);

double AbstractRouge(const Tokens& sentence, const std::vector<Sentence>& abstract,
                     const RougeConfig& cfg = {});
int NumericCount(const Tokens& sentence);
int TitleScore(const Tokens& sentence, const Tokens& title, const StopwordSet& stopwords,
               bool count_types = false);
int KeyphraseScore(const Tokens& sentence, const std::vector<Tokens>& keyphrases);
double TfIdf(const Tokens& sentence, const PaperContext& paper, const CorpusStats& stats,
             double smoothing = 0.0);
double DocTfIdf(const Tokens& sentence, const PaperContext& paper, const StopwordSet& stopwords);
int SentenceLength(const Tokens& sentence);

SentenceFeatures ExtractFeatures(const Tokens& sentence, LocationCategory location,
                                 const PaperContext& paper, const CorpusStats& stats,
                                 const FeatureConfig& cfg = {});

// Per-component z-scores with statistics from the training split. A
// component whose training standard deviation is zero maps to 0.
class FeatureNormalizer {
 public:
  FeatureNormalizer() = default;
  FeatureNormalizer(FeatureVector mean, FeatureVector stddev);

  static FeatureNormalizer Fit(const std::vector<FeatureVector>& rows);

  bool fitted() const { return fitted_; }
  const FeatureVector& mean() const { return mean_; }
  const FeatureVector& stddev() const { return stddev_; }
  FeatureVector Transform(const FeatureVector& raw) const;

 private:
  FeatureVector mean_ = FeatureVector::Zero();
  FeatureVector stddev_ = FeatureVector::Ones();
  bool fitted_ = false;
};

// CSV with a header row, columns in feature order.
void WriteFeatureCsv(std::ostream& out, const std::vector<std::string>& row_ids,
                     const std::vector<SentenceFeatures>& rows);

}  // namespace pubsum

#endif  // PUBSUM_FEATURES_H_
