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

#include "pubsum/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

namespace pubsum {
namespace {

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "AbstractROUGE",  "Location", "NumericCount", "TitleScore",
    "KeyphraseScore", "TFIDF",    "DocTFIDF",     "SentenceLength",
};

std::string Canonical(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

constexpr const char* kStatsMagic = "pubsum-corpus-stats v1";

}  // namespace

std::string_view FeatureName(FeatureId id) { return kFeatureNames.at(static_cast<size_t>(id)); }

std::optional<FeatureId> ParseFeatureName(std::string_view name) {
  const std::string key = Canonical(name);
  for (size_t i = 0; i < kFeatureNames.size(); ++i) {
    if (Canonical(kFeatureNames[i]) == key) return static_cast<FeatureId>(i);
  }
  return std::nullopt;
}

double SentenceFeatures::Get(FeatureId id) const {
  switch (id) {
    case FeatureId::kAbstractRouge: return abstract_rouge;
    case FeatureId::kLocation: return location;
    case FeatureId::kNumericCount: return numeric_count;
    case FeatureId::kTitleScore: return title_score;
    case FeatureId::kKeyphraseScore: return keyphrase_score;
    case FeatureId::kTfIdf: return tf_idf;
    case FeatureId::kDocTfIdf: return doc_tf_idf;
    case FeatureId::kSentenceLength: return sentence_length;
  }
  return 0.0;
}

FeatureVector SentenceFeatures::ToVector() const {
  FeatureVector v;
  for (int i = 0; i < kNumFeatures; ++i) v[i] = Get(static_cast<FeatureId>(i));
  return v;
}

// --- CorpusStats -------------------------------------------------------------

CorpusStats CorpusStats::Build(const std::vector<Paper>& papers, const StopwordSet& stopwords) {
  CorpusStats stats;
  stats.num_documents_ = static_cast<int>(papers.size());
  stats.stopwords_ = stopwords;
  for (const auto& paper : papers) {
    std::unordered_set<std::string> seen;
    for (const auto& section : paper.sections)
      for (const auto& s : section.sentences) seen.insert(s.tokens.begin(), s.tokens.end());
    for (const auto& token : seen) ++stats.df_[token];
  }
  return stats;
}

int CorpusStats::DocumentFrequency(const std::string& token) const {
  auto it = df_.find(token);
  return it == df_.end() ? 0 : it->second;
}

double CorpusStats::Idf(const std::string& token, double smoothing) const {
  const double df = std::max(DocumentFrequency(token), 1);
  return std::log((num_documents_ + smoothing) / (df + smoothing));
}

void CorpusStats::Save(std::ostream& out) const {
  const std::vector<std::string> stop = stopwords_.Sorted();
  out << kStatsMagic << '\n' << "num_documents " << num_documents_ << '\n';
  std::vector<std::pair<std::string, int>> rows(df_.begin(), df_.end());
  std::sort(rows.begin(), rows.end());
  out << "document_frequency " << rows.size() << '\n';
  for (const auto& [token, count] : rows) out << token << '\t' << count << '\n';
  out << "stopwords " << stop.size() << '\n';
  for (const auto& w : stop) out << w << '\n';
}

CorpusStats CorpusStats::Load(std::istream& in) {
  auto fail = [](const std::string& what) -> CorpusStats {
    throw Error("corpus stats: " + what);
  };
  std::string line, key;
  if (!std::getline(in, line) || line != kStatsMagic) return fail("bad header");
  CorpusStats stats;
  size_t n = 0;
  if (!(in >> key >> stats.num_documents_) || key != "num_documents") return fail("num_documents");
  if (!(in >> key >> n) || key != "document_frequency") return fail("document_frequency");
  std::getline(in, line);
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) return fail("truncated document_frequency");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) return fail("malformed df row");
    stats.df_[line.substr(0, tab)] = std::stoi(line.substr(tab + 1));
  }
  if (!(in >> key >> n) || key != "stopwords") return fail("stopwords");
  std::getline(in, line);
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) return fail("truncated stopwords");
    stats.stopwords_.Insert(line);
  }
  return stats;
}

void CorpusStats::SaveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus stats '" + path + "'");
  Save(out);
}

CorpusStats CorpusStats::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus stats '" + path + "'");
  return Load(in);
}

// --- PaperContext ------------------------------------------------------------

PaperContext::PaperContext(const Paper& paper) : paper_(&paper) {
  abstract_tokens_ = Concatenate(paper.abstract);
  for (const auto& k : paper.keywords) {
    Tokens t = Tokenize(k);
    if (!t.empty()) keyphrases_.push_back(std::move(t));
  }
  for (const auto& section : paper.sections) {
    for (const auto& s : section.sentences) {
      ++num_sentences_;
      body_tokens_ += s.tokens.size();
      std::unordered_set<std::string_view> seen;
      for (const auto& t : s.tokens) {
        ++body_counts_[t];
        if (seen.insert(t).second) ++sentence_frequency_[t];
      }
    }
  }
}

double PaperContext::TermFrequency(const std::string& token) const {
  if (body_tokens_ == 0) return 0.0;
  auto it = body_counts_.find(token);
  return it == body_counts_.end() ? 0.0
                                  : static_cast<double>(it->second) / static_cast<double>(body_tokens_);
}

int PaperContext::SentenceFrequency(const std::string& token) const {
  auto it = sentence_frequency_.find(token);
  return it == sentence_frequency_.end() ? 0 : it->second;
}

// --- individual features -----------------------------------------------------

bool IsNumberToken(std::string_view token) {
  if (token.empty()) return false;
  size_t i = 0, digits = 0;
  while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i, ++digits;
  if (digits == 0) return false;
  if (i == token.size()) return true;
  if (token[i] != '.') return false;
  ++i;
  size_t frac = 0;
  while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i, ++frac;
  return frac > 0 && i == token.size();
}

double AbstractRouge(const Tokens& sentence, const std::vector<Sentence>& abstract,
                     const RougeConfig& cfg) {
  if (abstract.empty()) throw Error("abstract_rouge: empty abstract");
  return RougeL(sentence, Concatenate(abstract), cfg).f_score;
}

int NumericCount(const Tokens& sentence) {
  return static_cast<int>(std::count_if(sentence.begin(), sentence.end(),
                                        [](const std::string& t) { return IsNumberToken(t); }));
}

int TitleScore(const Tokens& sentence, const Tokens& title, const StopwordSet& stopwords,
               bool count_types) {
  std::unordered_set<std::string_view> title_words;
  for (const auto& t : title)
    if (!stopwords.Contains(t)) title_words.insert(t);
  std::unordered_set<std::string_view> counted;
  int score = 0;
  for (const auto& t : sentence) {
    if (!title_words.count(t)) continue;
    if (count_types && !counted.insert(t).second) continue;
    ++score;
  }
  return score;
}

int KeyphraseScore(const Tokens& sentence, const std::vector<Tokens>& keyphrases) {
  int score = 0;
  for (const auto& phrase : keyphrases) {
    if (phrase.empty() || phrase.size() > sentence.size()) continue;
    if (std::search(sentence.begin(), sentence.end(), phrase.begin(), phrase.end()) !=
        sentence.end())
      ++score;
  }
  return score;
}

double TfIdf(const Tokens& sentence, const PaperContext& paper, const CorpusStats& stats,
             double smoothing) {
  double sum = 0.0;
  int n = 0;
  for (const auto& t : sentence) {
    if (stats.stopwords().Contains(t)) continue;
    sum += paper.TermFrequency(t) * stats.Idf(t, smoothing);
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

double DocTfIdf(const Tokens& sentence, const PaperContext& paper, const StopwordSet& stopwords) {
  std::unordered_map<std::string_view, int> counts;
  for (const auto& t : sentence) ++counts[t];
  const double num_sentences = std::max(paper.NumSentences(), 1);
  double sum = 0.0;
  int n = 0;
  for (const auto& t : sentence) {
    if (stopwords.Contains(t)) continue;
    const double sf = std::max(paper.SentenceFrequency(t), 1);
    sum += counts[t] * std::log(std::max(num_sentences / sf, 1.0));
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

int SentenceLength(const Tokens& sentence) { return static_cast<int>(sentence.size()); }

SentenceFeatures ExtractFeatures(const Tokens& sentence, LocationCategory location,
                                 const PaperContext& paper, const CorpusStats& stats,
                                 const FeatureConfig& cfg) {
  SentenceFeatures f;
  f.abstract_rouge = RougeL(sentence, paper.abstract_tokens(), cfg.rouge).f_score;
  f.location = static_cast<int>(location);
  f.numeric_count = NumericCount(sentence);
  f.title_score = TitleScore(sentence, paper.title_tokens(), stats.stopwords(), cfg.title_count_types);
  f.keyphrase_score = KeyphraseScore(sentence, paper.keyphrases());
  f.tf_idf = TfIdf(sentence, paper, stats, cfg.idf_smoothing);
  f.doc_tf_idf = DocTfIdf(sentence, paper, stats.stopwords());
  f.sentence_length = SentenceLength(sentence);
  return f;
}

// --- normalization -----------------------------------------------------------

FeatureNormalizer::FeatureNormalizer(FeatureVector mean, FeatureVector stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)), fitted_(true) {}

FeatureNormalizer FeatureNormalizer::Fit(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) throw Error("normalizer: no training rows");
  FeatureVector mean = FeatureVector::Zero();
  for (const auto& r : rows) mean += r;
  mean /= static_cast<double>(rows.size());
  FeatureVector var = FeatureVector::Zero();
  for (const auto& r : rows) var += (r - mean).cwiseAbs2();
  var /= static_cast<double>(rows.size());
  return FeatureNormalizer(mean, var.cwiseSqrt());
}

FeatureVector FeatureNormalizer::Transform(const FeatureVector& raw) const {
  if (!fitted_) throw Error("normalizer: statistics missing (fit on the training split first)");
  FeatureVector out;
  for (int i = 0; i < kNumFeatures; ++i)
    out[i] = stddev_[i] > 0.0 ? (raw[i] - mean_[i]) / stddev_[i] : 0.0;
  return out;
}

void WriteFeatureCsv(std::ostream& out, const std::vector<std::string>& row_ids,
                     const std::vector<SentenceFeatures>& rows) {
  out << "id";
  for (auto name : kFeatureNames) out << ',' << name;
  out << '\n';
  char buf[32];
  for (size_t i = 0; i < rows.size(); ++i) {
    out << (i < row_ids.size() ? row_ids[i] : std::to_string(i));
    const FeatureVector v = rows[i].ToVector();
    for (int j = 0; j < kNumFeatures; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", v[j]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace pubsum
