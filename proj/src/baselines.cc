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

#include "pubsum/baselines.h"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace pubsum {
namespace {

struct Body {
  std::vector<BodyRef> refs;
  std::vector<Tokens> content;  // stopwords removed
};

Body ContentBody(const Paper& paper, const StopwordSet& stopwords) {
  Body body;
  body.refs = BodySentences(paper);
  for (const auto& ref : body.refs) {
    Tokens kept;
    for (const auto& t : At(paper, ref).tokens)
      if (!stopwords.Contains(t)) kept.push_back(t);
    body.content.push_back(std::move(kept));
  }
  return body;
}

// Indices of the k highest scores; equal scores keep document order.
std::vector<BodyRef> TopByScore(const Body& body, const Eigen::VectorXd& scores, int k) {
  std::vector<size_t> order(body.refs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  const size_t n = std::min(order.size(), static_cast<size_t>(std::max(k, 0)));
  std::vector<BodyRef> out;
  for (size_t i = 0; i < n; ++i) out.push_back(body.refs[order[i]]);
  return out;
}

std::unordered_map<std::string, int> Counts(const std::vector<Tokens>& sentences) {
  std::unordered_map<std::string, int> counts;
  for (const auto& s : sentences)
    for (const auto& t : s) ++counts[t];
  return counts;
}

}  // namespace

std::vector<BodyRef> SumBasic(const Paper& paper, int k, const StopwordSet& stopwords) {
  const Body body = ContentBody(paper, stopwords);
  const size_t n = body.refs.size();
  const size_t budget = std::min(n, static_cast<size_t>(std::max(k, 0)));
  auto counts = Counts(body.content);
  double total = 0;
  for (const auto& [w, c] : counts) total += c;
  std::unordered_map<std::string, double> prob;
  for (const auto& [w, c] : counts) prob[w] = total > 0 ? c / total : 0.0;

  std::vector<bool> used(n, false);
  std::vector<BodyRef> out;
  while (out.size() < budget) {
    size_t best = n;
    double best_score = -1.0;
    for (size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      double score = 0.0;
      for (const auto& t : body.content[i]) score += prob[t];
      if (!body.content[i].empty()) score /= static_cast<double>(body.content[i].size());
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    used[best] = true;
    out.push_back(body.refs[best]);
    std::unordered_set<std::string> seen(body.content[best].begin(), body.content[best].end());
    for (const auto& w : seen) prob[w] *= prob[w];
  }
  return out;
}

double SmoothedKl(const std::vector<Tokens>& document, const std::vector<Tokens>& summary) {
  const auto doc = Counts(document);
  const auto sum = Counts(summary);
  double doc_total = 0, sum_total = 0;
  for (const auto& [w, c] : doc) doc_total += c;
  for (const auto& [w, c] : sum)
    if (doc.count(w)) sum_total += c;
  const double vocab = static_cast<double>(doc.size());
  double kl = 0.0;
  for (const auto& [w, c] : doc) {
    const auto it = sum.find(w);
    const double p = (c + 1.0) / (doc_total + vocab);
    const double q = ((it == sum.end() ? 0 : it->second) + 1.0) / (sum_total + vocab);
    kl += p * std::log(p / q);
  }
  return kl;
}

std::vector<BodyRef> KlSum(const Paper& paper, int k, const StopwordSet& stopwords) {
  const Body body = ContentBody(paper, stopwords);
  const size_t n = body.refs.size();
  const size_t budget = std::min(n, static_cast<size_t>(std::max(k, 0)));
  std::vector<bool> used(n, false);
  std::vector<Tokens> summary;
  std::vector<BodyRef> out;
  while (out.size() < budget) {
    size_t best = n;
    double best_kl = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      summary.push_back(body.content[i]);
      const double kl = SmoothedKl(body.content, summary);
      summary.pop_back();
      if (kl < best_kl) {
        best_kl = kl;
        best = i;
      }
    }
    used[best] = true;
    summary.push_back(body.content[best]);
    out.push_back(body.refs[best]);
  }
  return out;
}

Eigen::MatrixXd TextRankGraph(const std::vector<Tokens>& sentences) {
  const auto n = static_cast<Eigen::Index>(sentences.size());
  std::vector<std::set<std::string>> types;
  for (const auto& s : sentences) types.emplace_back(s.begin(), s.end());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      std::vector<std::string> shared;
      std::set_intersection(types[i].begin(), types[i].end(), types[j].begin(), types[j].end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      double denom = std::log(static_cast<double>(sentences[i].size())) +
                     std::log(static_cast<double>(sentences[j].size()));
      if (!(denom > 0)) denom = 1.0;
      w(i, j) = w(j, i) = static_cast<double>(shared.size()) / denom;
    }
  }
  return w;
}

Eigen::MatrixXd LexRankGraph(const std::vector<Tokens>& sentences, double threshold) {
  const auto n = static_cast<Eigen::Index>(sentences.size());
  std::unordered_map<std::string, int> sentence_frequency;
  for (const auto& s : sentences) {
    std::unordered_set<std::string> seen(s.begin(), s.end());
    for (const auto& t : seen) ++sentence_frequency[t];
  }
  std::vector<std::unordered_map<std::string, double>> vectors;
  std::vector<double> norms;
  for (const auto& s : sentences) {
    std::unordered_map<std::string, double> v;
    for (const auto& t : s) v[t] += 1.0;
    double norm = 0.0;
    for (auto& [t, x] : v) {
      x *= std::log(static_cast<double>(n) / sentence_frequency[t]);
      norm += x * x;
    }
    vectors.push_back(std::move(v));
    norms.push_back(std::sqrt(norm));
  }
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (norms[i] == 0.0 || norms[j] == 0.0) continue;
      double dot = 0.0;
      for (const auto& [t, x] : vectors[i]) {
        auto it = vectors[j].find(t);
        if (it != vectors[j].end()) dot += x * it->second;
      }
      if (dot / (norms[i] * norms[j]) > threshold) adj(i, j) = adj(j, i) = 1.0;
    }
  }
  return adj;
}

Eigen::VectorXd PowerIterationRank(const Eigen::MatrixXd& weights, double damping,
                                   double tolerance, int max_iterations) {
  if (!(damping > 0.0 && damping < 1.0)) throw Error("rank: damping must be in (0, 1)");
  if (!(tolerance > 0.0)) throw Error("rank: tolerance must be positive");
  const Eigen::Index n = weights.rows();
  if (n == 0) return {};
  const Eigen::VectorXd out_weight = weights.rowwise().sum();
  Eigen::VectorXd rank = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    double dangling = 0.0;
    Eigen::VectorXd spread = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (out_weight[i] > 0) spread += (rank[i] / out_weight[i]) * weights.row(i).transpose();
      else dangling += rank[i];
    }
    Eigen::VectorXd next =
        Eigen::VectorXd::Constant(n, (1.0 - damping) / n + damping * dangling / n) + damping * spread;
    next /= next.sum();
    const double change = (next - rank).lpNorm<1>();
    rank = std::move(next);
    if (change < tolerance) break;
  }
  return rank;
}

std::vector<BodyRef> TextRank(const Paper& paper, int k, const StopwordSet& stopwords,
                              const BaselineConfig& cfg) {
  const Body body = ContentBody(paper, stopwords);
  if (body.refs.empty()) return {};
  const auto rank = PowerIterationRank(TextRankGraph(body.content), cfg.damping, cfg.tolerance,
                                       cfg.max_iterations);
  return TopByScore(body, rank, k);
}

std::vector<BodyRef> LexRank(const Paper& paper, int k, const StopwordSet& stopwords,
                             const BaselineConfig& cfg) {
  const Body body = ContentBody(paper, stopwords);
  if (body.refs.empty()) return {};
  const auto rank = PowerIterationRank(LexRankGraph(body.content, cfg.lexrank_threshold),
                                       cfg.damping, cfg.tolerance, cfg.max_iterations);
  return TopByScore(body, rank, k);
}

Eigen::VectorXd LsaScores(const Eigen::MatrixXd& term_sentence, int topics) {
  if (term_sentence.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(term_sentence, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma[0] > 0)) return {};
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > 1e-10 * sigma[0]) ++rank;
  const Eigen::Index r = std::min<Eigen::Index>(rank, std::max(topics, 1));
  const Eigen::MatrixXd weighted = svd.matrixV().leftCols(r) * sigma.head(r).asDiagonal();
  return weighted.rowwise().norm();
}

std::vector<BodyRef> LsaSummarise(const Paper& paper, int k, const StopwordSet& stopwords,
                                  const BaselineConfig& cfg, std::vector<std::string>* warnings) {
  const Body body = ContentBody(paper, stopwords);
  if (body.refs.empty()) return {};
  std::map<std::string, Eigen::Index> terms;
  for (const auto& s : body.content)
    for (const auto& t : s) terms.emplace(t, 0);
  Eigen::Index next = 0;
  for (auto& [t, idx] : terms) idx = next++;
  const auto n = static_cast<Eigen::Index>(body.refs.size());
  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(terms.size()), n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (const auto& t : body.content[j]) matrix(terms[t], j) += 1.0;

  Eigen::VectorXd scores = LsaScores(matrix, cfg.lsa_topics);
  if (scores.size() == 0) {
    if (warnings)
      warnings->push_back("lsa: paper '" + paper.id +
                          "' has a rank-zero term matrix; ranking by term frequency");
    // Every token (stopwords included) weighted by its document frequency.
    std::unordered_map<std::string, int> counts;
    for (const auto& ref : body.refs)
      for (const auto& t : At(paper, ref).tokens) ++counts[t];
    scores = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (const auto& t : At(paper, body.refs[j]).tokens) scores[j] += counts[t];
  }
  return TopByScore(body, scores, k);
}

}  // namespace pubsum
