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

#ifndef PUBSUM_EVALUATION_H_
#define PUBSUM_EVALUATION_H_

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pubsum/baselines.h"
#include "pubsum/corpus.h"
#include "pubsum/models.h"
#include "pubsum/rouge.h"

namespace pubsum {

struct SummaryResult {
  std::string paper_id;
  std::string method;
  int k = 0;
  std::vector<BodyRef> selected;  // document order
  RougeScore rouge;               // against the concatenated highlights
};

// Selected sentences concatenated in document order.
Tokens SummaryTokens(const Paper& paper, const std::vector<BodyRef>& selected);
RougeScore ScoreSelection(const Paper& paper, const std::vector<BodyRef>& selected,
                          const RougeConfig& cfg = {});

// Wraps an arbitrary selection: sorts it into document order and scores it.
// Throws if a sentence is repeated or the selection exceeds k.
SummaryResult MakeSummary(const Paper& paper, std::vector<BodyRef> selection,
                          std::string method, int k, const RougeConfig& cfg = {});

// Top-k body sentences by score (one score per body sentence, document
// order; equal scores prefer the earlier sentence). Throws for k <= 0.
SummaryResult GenerateSummary(const Paper& paper, const std::vector<double>& scores, int k,
                              std::string method = "scores", const RougeConfig& cfg = {});
std::vector<BodyRef> TopK(const Paper& paper, const std::vector<double>& scores, int k);

// Greedy ROUGE-L oracle: repeatedly adds the body sentence that most raises
// the summary's f-score against the highlights, stopping at k sentences or
// when nothing improves it. Any `lower_bounds` selection (at most k
// sentences) that scores higher replaces the greedy result, so the oracle
// never falls below a method it is compared with.
SummaryResult OracleSummary(const Paper& paper, int k, const RougeConfig& cfg = {},
                            const std::vector<std::vector<BodyRef>>& lower_bounds = {});

// Fraction of instances whose thresholded prediction matches the label.
// Probability exactly 0.5 predicts class 0.
double EvaluateAccuracy(const std::vector<double>& probabilities, const std::vector<int>& labels);

// Mean precision, recall and f over summaries.
RougeScore MeanRouge(const std::vector<SummaryResult>& summaries);

// 100 * method / oracle; 100 when both are zero.
double OraclePercentage(double method_f, double oracle_f);

// --- method dispatch ---------------------------------------------------------

using Selector = std::function<std::vector<BodyRef>(const Paper&, int k)>;

struct MethodResources {
  std::map<Architecture, const Summariser*> models;
  // Tuned weights. "saf+f" and "s+f" use the entry for their pair;
  // "ensemble" uses the first entry.
  std::vector<EnsembleConfig> ensembles;
  EncodingResources encoding;
  BaselineConfig baseline;
  RougeConfig rouge;
  const StopwordSet* stopwords = &StopwordSet::Default();
  std::vector<std::string>* warnings = nullptr;
};

// Method ids: a model name (fnet, word2vec, word2vecaf, snet, sfnet, safnet),
// "saf+f", "s+f", "ensemble", "oracle", a baseline (sumbasic, klsum,
// textrank, lexrank, lsa) or "feature:<name>".
std::vector<std::string> KnownMethodNames();
Selector MakeSelector(std::string_view method, const MethodResources& resources);

// Per-sentence ensemble scores from two models.
std::vector<double> EnsembleScores(const std::vector<double>& p1, const std::vector<double>& p2,
                                   double c);

// Grid-searches C to maximize mean ROUGE-L f at budget k. p1[i] and p2[i]
// hold the two models' body scores for papers[i].
double TuneEnsembleOnPapers(const std::vector<Paper>& papers,
                            const std::vector<std::vector<double>>& p1,
                            const std::vector<std::vector<double>>& p2, int k,
                            const RougeConfig& cfg = {});

// --- section analyses --------------------------------------------------------

struct SectionMean {
  std::string category;  // "Title" or a location category name
  double mean_f = 0.0;
  size_t sentences = 0;
};

// Mean sentence-level ROUGE-L f against the highlights per category: the
// title, the abstract and every body category. Categories with no sentences
// are left out. Highlights themselves are not scored.
std::vector<SectionMean> SectionRougeAnalysis(const std::vector<Paper>& papers,
                                              const RougeConfig& cfg = {});

// Lowercase, collapse whitespace, strip trailing punctuation.
std::string NormalizeForCopy(std::string_view text);

struct CopyPasteOptions {
  // Unset: normalized exact match. Set: ROUGE-L f >= threshold.
  std::optional<double> rouge_threshold;
  RougeConfig rouge;
};

struct CopyPasteResult {
  std::array<int, kNumLocationCategories> counts{};
  // Empty when nothing was copied.
  std::optional<std::array<double, kNumLocationCategories>> shares;
  std::vector<std::string> warnings;
};

// Each highlight that reappears in the body counts once, for the category of
// its first copy.
CopyPasteResult CopyPasteAnalysis(const std::vector<Paper>& papers,
                                  const CopyPasteOptions& options = {});

// --- statistics --------------------------------------------------------------

double PearsonR(const std::vector<double>& x, const std::vector<double>& y);

struct TTestResult {
  double t = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;  // two-sided
};

// Two-sample t-test; pooled variance unless `welch`.
TTestResult UnpairedTTest(const std::vector<double>& a, const std::vector<double>& b,
                          bool welch = false);

// I_x(a, b).
double RegularizedIncompleteBeta(double a, double b, double x);
// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double StudentTwoSidedP(double t, double df);

// --- reports -----------------------------------------------------------------

struct MethodReport {
  std::string method;
  int k = 0;
  std::vector<SummaryResult> summaries;
  std::vector<double> oracle_f;  // per paper, aligned with summaries
  std::optional<double> accuracy;

  double MeanF() const;
  double OraclePct() const;  // mean of per-paper percentages
};

// One row per (method, paper).
void WritePerPaperCsv(std::ostream& out, const std::vector<MethodReport>& reports);
// JSON array of {method, k, mean_f, oracle_pct, accuracy, p_values}, where
// p_values maps every other method to the unpaired t-test p on per-paper f.
std::string ReportJson(const std::vector<MethodReport>& reports, bool welch = false);

}  // namespace pubsum

#endif  // PUBSUM_EVALUATION_H_
