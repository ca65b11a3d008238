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

#ifndef PUBSUM_EMBEDDINGS_H_
#define PUBSUM_EMBEDDINGS_H_

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pubsum/corpus.h"
#include "pubsum/stopwords.h"

namespace pubsum {

struct SkipGramConfig {
  int dim = 100;
  int min_count = 5;
  int window = 20;
  double downsample = 1e-3;
  int negative = 5;
  int epochs = 5;
  // Decays linearly to learning_rate * 1e-4 over all epochs.
  double learning_rate = 0.025;
  uint64_t seed = 1;
  // 1 is deterministic. More threads update shared vectors without locks,
  // so results then vary from run to run.
  int threads = 1;
};

class EmbeddingTable {
 public:
  using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> tokens, Matrix vectors);

  int dim() const { return static_cast<int>(vectors_.cols()); }
  size_t size() const { return tokens_.size(); }
  std::optional<int> Index(const std::string& token) const;
  bool Contains(const std::string& token) const { return index_.count(token) > 0; }
  auto Vector(int index) const { return vectors_.row(index); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const Matrix& vectors() const { return vectors_; }

  // Text format: "count dim" header, then one "token v1 ... vdim" line per
  // token with 9 significant digits, which round-trips float exactly.
  void Save(std::ostream& out) const;
  static EmbeddingTable Load(std::istream& in);
  void SaveFile(const std::string& path) const;
  static EmbeddingTable LoadFile(const std::string& path);

 private:
  std::vector<std::string> tokens_;
  Matrix vectors_;
  std::unordered_map<std::string, int> index_;
};

// Skip-gram with negative sampling and frequent-word subsampling. Context
// windows do not cross sentence boundaries.
EmbeddingTable TrainSkipGram(const std::vector<Tokens>& sentences, const SkipGramConfig& cfg);

// Title, abstract, highlights and body of every paper, one entry per sentence.
std::vector<Tokens> CorpusSentences(const std::vector<Paper>& papers);

// Mean of the vectors of in-vocabulary non-stopword tokens; zero when none.
Eigen::VectorXd SentenceVector(const Tokens& sentence, const EmbeddingTable& table,
                               const StopwordSet& stopwords);
// Token-weighted mean over the whole abstract.
Eigen::VectorXd AbstractVector(const std::vector<Sentence>& abstract, const EmbeddingTable& table,
                               const StopwordSet& stopwords);
// dim x length matrix of token vectors in order; out-of-vocabulary tokens
// become zero columns so sequence length is preserved.
Eigen::MatrixXd TokenSequence(const Tokens& sentence, const EmbeddingTable& table);

double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace pubsum

#endif  // PUBSUM_EMBEDDINGS_H_
