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

#ifndef PUBSUM_BASELINES_H_
#define PUBSUM_BASELINES_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pubsum/corpus.h"
#include "pubsum/stopwords.h"

namespace pubsum {

// Unsupervised reference summarisers. Each works on the body only and returns
// min(k, body size) distinct body sentences in selection order; k <= 0 gives
// an empty selection. Stopwords are removed before counting.

struct BaselineConfig {
  double damping = 0.85;
  double tolerance = 1e-6;  // L1 change between power iterations
  int max_iterations = 1000;
  double lexrank_threshold = 0.1;
  int lsa_topics = 3;
};

std::vector<BodyRef> SumBasic(const Paper& paper, int k, const StopwordSet& stopwords);
std::vector<BodyRef> KlSum(const Paper& paper, int k, const StopwordSet& stopwords);
std::vector<BodyRef> TextRank(const Paper& paper, int k, const StopwordSet& stopwords,
                              const BaselineConfig& cfg = {});
std::vector<BodyRef> LexRank(const Paper& paper, int k, const StopwordSet& stopwords,
                             const BaselineConfig& cfg = {});
// Appends a message to `warnings` when it falls back to term-frequency
// ranking because the term-sentence matrix has rank zero.
std::vector<BodyRef> LsaSummarise(const Paper& paper, int k, const StopwordSet& stopwords,
                                  const BaselineConfig& cfg = {},
                                  std::vector<std::string>* warnings = nullptr);

// --- building blocks (exposed for testing) -----------------------------------

// Shared word types over ln|a| + ln|b|; the denominator is taken as 1 when it
// is not positive.
Eigen::MatrixXd TextRankGraph(const std::vector<Tokens>& sentences);
// Binarized cosine similarity of within-document TF-IDF vectors.
Eigen::MatrixXd LexRankGraph(const std::vector<Tokens>& sentences, double threshold);
// Damped PageRank over a weighted graph; rows with no outgoing weight jump
// uniformly. Result is non-negative and sums to 1.
Eigen::VectorXd PowerIterationRank(const Eigen::MatrixXd& weights, double damping,
                                   double tolerance, int max_iterations);
// Steinberger-Jezek sentence lengths in the space of the top `topics`
// singular vectors. Columns are sentences. Returns an empty vector when the
// matrix has rank zero.
Eigen::VectorXd LsaScores(const Eigen::MatrixXd& term_sentence, int topics);
// KL(document || summary) over the document vocabulary with add-one smoothing
// applied to both distributions.
double SmoothedKl(const std::vector<Tokens>& document, const std::vector<Tokens>& summary);

}  // namespace pubsum

#endif  // PUBSUM_BASELINES_H_
