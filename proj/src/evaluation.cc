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

#include "pubsum/evaluation.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "json.hpp"

#include "pubsum/error.h"

namespace pubsum {
namespace {

std::vector<Sentence> SentencesOf(const Paper& paper, const std::vector<BodyRef>& refs) {
  std::vector<Sentence> out;
  out.reserve(refs.size());
  for (const BodyRef& r : refs) out.push_back(At(paper, r));
  return out;
}

}  // namespace

Tokens SummaryTokens(const Paper& paper, const std::vector<BodyRef>& selected) {
  std::vector<BodyRef> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  return Concatenate(SentencesOf(paper, sorted));
}

RougeScore ScoreSelection(const Paper& paper, const std::vector<BodyRef>& selected,
                          const RougeConfig& cfg) {
  return RougeL(SummaryTokens(paper, selected), Concatenate(paper.highlights), cfg);
}

SummaryResult MakeSummary(const Paper& paper, std::vector<BodyRef> selection, std::string method,
                          int k, const RougeConfig& cfg) {
  if (k <= 0) throw Error("summary length k must be positive, got " + std::to_string(k));
  if (static_cast<int>(selection.size()) > k) {
    throw Error("method '" + method + "' selected " + std::to_string(selection.size()) +
                " sentences for k=" + std::to_string(k));
  }
  std::sort(selection.begin(), selection.end());
  if (std::adjacent_find(selection.begin(), selection.end()) != selection.end()) {
    throw Error("method '" + method + "' selected a sentence twice in paper '" + paper.id + "'");
  }
  for (const BodyRef& r : selection) At(paper, r);  // bounds check
  SummaryResult out;
  out.paper_id = paper.id;
  out.method = std::move(method);
  out.k = k;
  out.rouge = ScoreSelection(paper, selection, cfg);
  out.selected = std::move(selection);
  return out;
}

std::vector<BodyRef> TopK(const Paper& paper, const std::vector<double>& scores, int k) {
  if (k <= 0) throw Error("summary length k must be positive, got " + std::to_string(k));
  std::vector<BodyRef> body = BodySentences(paper);
  if (scores.size() != body.size()) {
    throw Error("paper '" + paper.id + "': " + std::to_string(scores.size()) + " scores for " +
                std::to_string(body.size()) + " body sentences");
  }
  std::vector<size_t> order(body.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min<size_t>(order.size(), static_cast<size_t>(k)));
  std::vector<BodyRef> out;
  for (size_t i : order) out.push_back(body[i]);
  return out;
}

SummaryResult GenerateSummary(const Paper& paper, const std::vector<double>& scores, int k,
                              std::string method, const RougeConfig& cfg) {
  return MakeSummary(paper, TopK(paper, scores, k), std::move(method), k, cfg);
}

SummaryResult OracleSummary(const Paper& paper, int k, const RougeConfig& cfg,
                            const std::vector<std::vector<BodyRef>>& lower_bounds) {
  if (k <= 0) throw Error("summary length k must be positive, got " + std::to_string(k));
  const std::vector<BodyRef> body = BodySentences(paper);
  const Tokens reference = Concatenate(paper.highlights);
  std::vector<BodyRef> chosen;
  std::vector<bool> used(body.size(), false);
  double best = 0.0;
  while (static_cast<int>(chosen.size()) < k) {
    int pick = -1;
    double pick_f = best;
    for (size_t i = 0; i < body.size(); ++i) {
      if (used[i]) continue;
      std::vector<BodyRef> trial = chosen;
      trial.push_back(body[i]);
      double f = RougeL(SummaryTokens(paper, trial), reference, cfg).f_score;
      if (f > pick_f) {
        pick_f = f;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;
    used[pick] = true;
    chosen.push_back(body[pick]);
    best = pick_f;
  }
  for (const auto& candidate : lower_bounds) {
    if (candidate.empty() || static_cast<int>(candidate.size()) > k) continue;
    double f = ScoreSelection(paper, candidate, cfg).f_score;
    if (f > best) {
      best = f;
      chosen = candidate;
    }
  }
  return MakeSummary(paper, chosen, "oracle", k, cfg);
}

double EvaluateAccuracy(const std::vector<double>& probabilities, const std::vector<int>& labels) {
  if (probabilities.size() != labels.size()) {
    throw Error("accuracy: " + std::to_string(probabilities.size()) + " predictions for " +
                std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw Error("accuracy: no instances");
  size_t correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    int predicted = probabilities[i] > 0.5 ? 1 : 0;
    if (predicted == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

RougeScore MeanRouge(const std::vector<SummaryResult>& summaries) {
  RougeScore mean;
  if (summaries.empty()) return mean;
  for (const auto& s : summaries) {
    mean.precision += s.rouge.precision;
    mean.recall += s.rouge.recall;
    mean.f_score += s.rouge.f_score;
  }
  double n = static_cast<double>(summaries.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.f_score /= n;
  return mean;
}

double OraclePercentage(double method_f, double oracle_f) {
  if (oracle_f <= 0.0) return method_f <= 0.0 ? 100.0 : std::numeric_limits<double>::infinity();
  return 100.0 * method_f / oracle_f;
}

// --- method dispatch ---------------------------------------------------------

std::vector<std::string> KnownMethodNames() {
  std::vector<std::string> out;
  for (Architecture a : kAllArchitectures) out.emplace_back(ArchitectureName(a));
  for (const char* m : {"saf+f", "s+f", "ensemble", "oracle", "sumbasic", "klsum", "textrank",
                        "lexrank", "lsa"}) {
    out.emplace_back(m);
  }
  for (int i = 0; i < kNumFeatures; ++i) {
    auto id = static_cast<FeatureId>(i);
    try {
      RequireRankableFeature(id);
    } catch (const Error&) {
      continue;
    }
    out.push_back("feature:" + std::string(FeatureName(id)));
  }
  return out;
}

namespace {

const Summariser& RequireModel(const MethodResources& r, Architecture arch) {
  auto it = r.models.find(arch);
  if (it == r.models.end() || it->second == nullptr) {
    throw Error("no trained '" + std::string(ArchitectureName(arch)) + "' model available");
  }
  return *it->second;
}

Selector EnsembleSelector(const MethodResources& r, const EnsembleConfig& e) {
  const Summariser& m1 = RequireModel(r, e.s1);
  const Summariser& m2 = RequireModel(r, e.s2);
  EncodingResources enc = r.encoding;
  double c = e.c;
  return [&m1, &m2, enc, c](const Paper& paper, int k) {
    return TopK(paper,
                EnsembleScores(ScoreBody(m1, paper, enc), ScoreBody(m2, paper, enc), c), k);
  };
}

}  // namespace

Selector MakeSelector(std::string_view method, const MethodResources& r) {
  if (auto arch = ParseArchitecture(method)) {
    const Summariser& model = RequireModel(r, *arch);
    EncodingResources enc = r.encoding;
    return [&model, enc](const Paper& paper, int k) {
      return TopK(paper, ScoreBody(model, paper, enc), k);
    };
  }
  if (method == "saf+f" || method == "s+f" || method == "ensemble") {
    if (method == "ensemble") {
      if (r.ensembles.empty()) throw Error("method 'ensemble' needs a tuned ensemble configuration");
      return EnsembleSelector(r, r.ensembles.front());
    }
    EnsembleConfig pair = method == "saf+f" ? EnsembleConfig::SafPlusF() : EnsembleConfig::SPlusF();
    for (const auto& e : r.ensembles) {
      if (e.s1 == pair.s1 && e.s2 == pair.s2) return EnsembleSelector(r, e);
    }
    throw Error("method '" + std::string(method) + "' needs a tuned weight for " +
                std::string(ArchitectureName(pair.s1)) + "+" +
                std::string(ArchitectureName(pair.s2)));
  }
  const StopwordSet* stop = r.stopwords;
  if (stop == nullptr) throw Error("no stopword list configured");
  if (method == "oracle") {
    RougeConfig cfg = r.rouge;
    return [cfg](const Paper& paper, int k) { return OracleSummary(paper, k, cfg).selected; };
  }
  if (method == "sumbasic") {
    return [stop](const Paper& p, int k) { return SumBasic(p, k, *stop); };
  }
  if (method == "klsum") {
    return [stop](const Paper& p, int k) { return KlSum(p, k, *stop); };
  }
  BaselineConfig b = r.baseline;
  if (method == "textrank") {
    return [stop, b](const Paper& p, int k) { return TextRank(p, k, *stop, b); };
  }
  if (method == "lexrank") {
    return [stop, b](const Paper& p, int k) { return LexRank(p, k, *stop, b); };
  }
  if (method == "lsa") {
    auto* warnings = r.warnings;
    return [stop, b, warnings](const Paper& p, int k) {
      return LsaSummarise(p, k, *stop, b, warnings);
    };
  }
  constexpr std::string_view kFeaturePrefix = "feature:";
  if (method.substr(0, kFeaturePrefix.size()) == kFeaturePrefix) {
    std::string_view name = method.substr(kFeaturePrefix.size());
    auto id = ParseFeatureName(name);
    if (!id) throw Error("unknown feature '" + std::string(name) + "'");
    RequireRankableFeature(*id);
    if (r.encoding.stats == nullptr) throw Error("method '" + std::string(method) + "' needs corpus statistics");
    EncodingResources enc = r.encoding;
    FeatureId fid = *id;
    return [enc, fid](const Paper& paper, int k) {
      std::vector<double> scores;
      for (const auto& f : BodyFeatures(paper, enc)) scores.push_back(SingleFeatureScore(f, fid));
      return TopK(paper, scores, k);
    };
  }
  std::string known;
  for (const auto& m : KnownMethodNames()) known += (known.empty() ? "" : ", ") + m;
  throw Error("unknown method '" + std::string(method) + "' (known: " + known + ")");
}

std::vector<double> EnsembleScores(const std::vector<double>& p1, const std::vector<double>& p2,
                                   double c) {
  if (p1.size() != p2.size()) {
    throw Error("ensemble: score vectors differ in length (" + std::to_string(p1.size()) +
                " vs " + std::to_string(p2.size()) + ")");
  }
  std::vector<double> out(p1.size());
  for (size_t i = 0; i < p1.size(); ++i) out[i] = Ensemble(p1[i], p2[i], c);
  return out;
}

double TuneEnsembleOnPapers(const std::vector<Paper>& papers,
                            const std::vector<std::vector<double>>& p1,
                            const std::vector<std::vector<double>>& p2, int k,
                            const RougeConfig& cfg) {
  if (papers.empty()) throw Error("ensemble tuning needs at least one paper");
  if (p1.size() != papers.size() || p2.size() != papers.size()) {
    throw Error("ensemble tuning: score lists do not match the papers");
  }
  return TuneEnsembleWeight([&](double c) {
    double total = 0.0;
    for (size_t i = 0; i < papers.size(); ++i) {
      total += GenerateSummary(papers[i], EnsembleScores(p1[i], p2[i], c), k, "ensemble", cfg)
                   .rouge.f_score;
    }
    return total / static_cast<double>(papers.size());
  });
}

// --- section analyses --------------------------------------------------------

std::vector<SectionMean> SectionRougeAnalysis(const std::vector<Paper>& papers,
                                              const RougeConfig& cfg) {
  // slot 0 is the title, then the location categories
  std::array<double, kNumLocationCategories + 1> sum{};
  std::array<size_t, kNumLocationCategories + 1> count{};
  for (const Paper& paper : papers) {
    const Tokens reference = Concatenate(paper.highlights);
    auto add = [&](size_t slot, const Tokens& tokens) {
      sum[slot] += RougeL(tokens, reference, cfg).f_score;
      ++count[slot];
    };
    if (!paper.title.tokens.empty()) add(0, paper.title.tokens);
    for (const auto& s : paper.abstract) {
      add(1 + static_cast<size_t>(LocationCategory::kAbstract), s.tokens);
    }
    for (const auto& section : paper.sections) {
      for (const auto& s : section.sentences) add(1 + static_cast<size_t>(section.category), s.tokens);
    }
  }
  std::vector<SectionMean> out;
  for (size_t slot = 0; slot < sum.size(); ++slot) {
    if (count[slot] == 0) continue;
    std::string name = slot == 0
                           ? std::string("Title")
                           : std::string(CategoryName(static_cast<LocationCategory>(slot - 1)));
    out.push_back({name, sum[slot] / static_cast<double>(count[slot]), count[slot]});
  }
  return out;
}

std::string NormalizeForCopy(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    auto u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
  }
  while (!out.empty()) {
    auto u = static_cast<unsigned char>(out.back());
    if (std::ispunct(u) || std::isspace(u)) {
      out.pop_back();
    } else {
      break;
    }
  }
  return out;
}

CopyPasteResult CopyPasteAnalysis(const std::vector<Paper>& papers,
                                  const CopyPasteOptions& options) {
  CopyPasteResult result;
  for (const Paper& paper : papers) {
    const std::vector<BodyRef> body = BodySentences(paper);
    std::vector<std::string> normalized;
    if (!options.rouge_threshold) {
      for (const BodyRef& r : body) normalized.push_back(NormalizeForCopy(At(paper, r).raw_text));
    }
    for (const Sentence& h : paper.highlights) {
      std::string key = options.rouge_threshold ? std::string() : NormalizeForCopy(h.raw_text);
      for (size_t i = 0; i < body.size(); ++i) {
        bool match = options.rouge_threshold
                         ? RougeL(At(paper, body[i]).tokens, h.tokens, options.rouge).f_score >=
                               *options.rouge_threshold
                         : (!key.empty() && normalized[i] == key);
        if (match) {
          ++result.counts[static_cast<size_t>(paper.sections[body[i].section].category)];
          break;
        }
      }
    }
  }
  int total = std::accumulate(result.counts.begin(), result.counts.end(), 0);
  if (total == 0) {
    result.warnings.push_back("no highlight was found copied in any body section");
  } else {
    std::array<double, kNumLocationCategories> shares{};
    for (size_t i = 0; i < shares.size(); ++i) {
      shares[i] = static_cast<double>(result.counts[i]) / total;
    }
    result.shares = shares;
  }
  return result;
}

// --- statistics --------------------------------------------------------------

namespace {

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SumSquaredDeviation(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

// Continued fraction for the incomplete beta (modified Lentz).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta did not converge");
}

}  // namespace

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                     b * std::log1p(-x);
  double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTwoSidedP(double t, double df) {
  if (!(df > 0.0)) throw Error("t distribution needs positive degrees of freedom");
  if (std::isnan(t)) throw Error("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(df / 2.0, 0.5, df / (df + t * t));
}

double PearsonR(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error("pearson: samples differ in length (" + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw Error("pearson: need at least 3 pairs");
  double mx = Mean(x), my = Mean(y);
  double sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my);
  double sxx = SumSquaredDeviation(x, mx), syy = SumSquaredDeviation(y, my);
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: a sample has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TTestResult UnpairedTTest(const std::vector<double>& a, const std::vector<double>& b, bool welch) {
  if (a.size() < 2 || b.size() < 2) throw Error("t-test: each sample needs at least 2 values");
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double ma = Mean(a), mb = Mean(b);
  double va = SumSquaredDeviation(a, ma) / (na - 1.0);
  double vb = SumSquaredDeviation(b, mb) / (nb - 1.0);
  TTestResult r;
  double se2;
  if (welch) {
    se2 = va / na + vb / nb;
    double num = se2 * se2;
    double den = (va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0);
    r.degrees_of_freedom = den > 0.0 ? num / den : na + nb - 2.0;
  } else {
    r.degrees_of_freedom = na + nb - 2.0;
    double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / r.degrees_of_freedom;
    se2 = pooled * (1.0 / na + 1.0 / nb);
  }
  double diff = ma - mb;
  if (se2 <= 0.0) {
    if (diff == 0.0) {
      r.t = 0.0;
      r.p_value = 1.0;
    } else {
      r.t = diff > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.p_value = StudentTwoSidedP(r.t, r.degrees_of_freedom);
  return r;
}

// --- reports -----------------------------------------------------------------

double MethodReport::MeanF() const { return MeanRouge(summaries).f_score; }

double MethodReport::OraclePct() const {
  if (summaries.empty()) return 0.0;
  if (oracle_f.size() != summaries.size()) throw Error("report: oracle scores are not aligned");
  double total = 0.0;
  for (size_t i = 0; i < summaries.size(); ++i) {
    total += OraclePercentage(summaries[i].rouge.f_score, oracle_f[i]);
  }
  return total / static_cast<double>(summaries.size());
}

void WritePerPaperCsv(std::ostream& out, const std::vector<MethodReport>& reports) {
  out << "method,k,paper_id,selected,precision,recall,f_score,oracle_f\n";
  char buf[64];
  for (const auto& rep : reports) {
    for (size_t i = 0; i < rep.summaries.size(); ++i) {
      const auto& s = rep.summaries[i];
      std::string selected;
      for (const BodyRef& r : s.selected) {
        if (!selected.empty()) selected += ';';
        selected += std::to_string(r.section) + ":" + std::to_string(r.sentence);
      }
      out << rep.method << ',' << rep.k << ',';
      nlohmann::json id = s.paper_id;
      bool plain = s.paper_id.find_first_of(",\"\n") == std::string::npos;
      out << (plain ? s.paper_id : id.dump()) << ',' << selected;
      for (double v : {s.rouge.precision, s.rouge.recall, s.rouge.f_score,
                       i < rep.oracle_f.size() ? rep.oracle_f[i] : 0.0}) {
        std::snprintf(buf, sizeof(buf), ",%.6f", v);
        out << buf;
      }
      out << '\n';
    }
  }
}

std::string ReportJson(const std::vector<MethodReport>& reports, bool welch) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  std::vector<std::vector<double>> per_paper;
  for (const auto& rep : reports) {
    std::vector<double> f;
    for (const auto& s : rep.summaries) f.push_back(s.rouge.f_score);
    per_paper.push_back(std::move(f));
  }
  for (size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    nlohmann::ordered_json j;
    j["method"] = rep.method;
    j["k"] = rep.k;
    j["papers"] = rep.summaries.size();
    j["mean_f"] = rep.MeanF();
    j["oracle_pct"] = rep.oracle_f.empty() ? nlohmann::ordered_json(nullptr)
                                           : nlohmann::ordered_json(rep.OraclePct());
    j["accuracy"] = rep.accuracy ? nlohmann::ordered_json(*rep.accuracy)
                                 : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (size_t o = 0; o < reports.size(); ++o) {
      if (o == i || per_paper[i].size() < 2 || per_paper[o].size() < 2) continue;
      p[reports[o].method] = UnpairedTTest(per_paper[i], per_paper[o], welch).p_value;
    }
    j["p_values"] = p;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace pubsum
