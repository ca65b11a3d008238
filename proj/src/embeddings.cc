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

#include "pubsum/embeddings.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "pubsum/error.h"
#include "pubsum/random.h"

namespace pubsum {
namespace {

struct Vocabulary {
  std::vector<std::string> tokens;
  std::vector<int64_t> counts;
  std::unordered_map<std::string, int> index;
  int64_t total = 0;
};

Vocabulary BuildVocabulary(const std::vector<Tokens>& sentences, int min_count) {
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& s : sentences)
    for (const auto& t : s) ++counts[t];
  std::vector<std::pair<std::string, int64_t>> kept;
  for (auto& [token, count] : counts)
    if (count >= min_count) kept.emplace_back(token, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocabulary vocab;
  for (auto& [token, count] : kept) {
    vocab.index[token] = static_cast<int>(vocab.tokens.size());
    vocab.tokens.push_back(token);
    vocab.counts.push_back(count);
    vocab.total += count;
  }
  return vocab;
}

// Cumulative unigram^0.75 distribution for negative draws.
std::vector<double> NoiseDistribution(const Vocabulary& vocab) {
  std::vector<double> cdf(vocab.counts.size());
  double acc = 0.0;
  for (size_t i = 0; i < cdf.size(); ++i) {
    acc += std::pow(static_cast<double>(vocab.counts[i]), 0.75);
    cdf[i] = acc;
  }
  for (auto& c : cdf) c /= acc;
  return cdf;
}

int DrawNoise(const std::vector<double>& cdf, Rng& rng) {
  const double u = UniformUnit(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<size_t>(it - cdf.begin(), cdf.size() - 1));
}

float Sigmoid(float x) {
  x = std::clamp(x, -30.0f, 30.0f);
  return 1.0f / (1.0f + std::exp(-x));
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens, Matrix vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(tokens_.size()) != vectors_.rows())
    throw Error("embedding table: token count does not match vector rows");
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second)
      throw Error("embedding table: duplicate token '" + tokens_[i] + "'");
  }
}

std::optional<int> EmbeddingTable::Index(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingTable::Save(std::ostream& out) const {
  out << tokens_.size() << ' ' << vectors_.cols() << '\n';
  char buf[32];
  for (size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i];
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(vectors_(i, j)));
      out << buf;
    }
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::Load(std::istream& in) {
  size_t count = 0;
  int dim = 0;
  std::string line;
  if (!std::getline(in, line)) throw Error("embeddings: missing header");
  {
    std::istringstream header(line);
    if (!(header >> count >> dim) || dim <= 0) throw Error("embeddings: malformed header");
  }
  std::vector<std::string> tokens;
  Matrix vectors(count, dim);
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line))
      throw Error("embeddings: expected " + std::to_string(count) + " rows, got " + std::to_string(i));
    const char* p = line.c_str();
    const char* space = std::strchr(p, ' ');
    if (!space) throw Error("embeddings: malformed row " + std::to_string(i + 1));
    tokens.emplace_back(p, space);
    p = space;
    for (int j = 0; j < dim; ++j) {
      char* end = nullptr;
      const float v = std::strtof(p, &end);
      if (end == p) throw Error("embeddings: row " + std::to_string(i + 1) + " has too few values");
      vectors(i, j) = v;
      p = end;
    }
  }
  return EmbeddingTable(std::move(tokens), std::move(vectors));
}

void EmbeddingTable::SaveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write embeddings '" + path + "'");
  Save(out);
}

EmbeddingTable EmbeddingTable::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings '" + path + "'");
  return Load(in);
}

EmbeddingTable TrainSkipGram(const std::vector<Tokens>& sentences, const SkipGramConfig& cfg) {
  if (cfg.dim <= 0 || cfg.min_count <= 0 || cfg.window <= 0 || cfg.negative < 0 ||
      cfg.epochs <= 0 || !(cfg.learning_rate > 0) || !(cfg.downsample >= 0) || cfg.threads <= 0)
    throw Error("skip-gram: invalid configuration");
  if (sentences.empty()) throw Error("skip-gram: empty corpus");
  const Vocabulary vocab = BuildVocabulary(sentences, cfg.min_count);
  if (vocab.tokens.empty()) throw Error("skip-gram: empty vocabulary after min_count filtering");

  const int dim = cfg.dim;
  const auto vocab_size = static_cast<Eigen::Index>(vocab.tokens.size());
  EmbeddingTable::Matrix input(vocab_size, dim);
  EmbeddingTable::Matrix output = EmbeddingTable::Matrix::Zero(vocab_size, dim);
  {
    Rng init = MakeRng(cfg.seed, 0x1417ULL);
    for (Eigen::Index i = 0; i < vocab_size; ++i)
      for (int j = 0; j < dim; ++j)
        input(i, j) = static_cast<float>((UniformUnit(init) - 0.5) / dim);
  }

  std::vector<std::vector<int>> encoded(sentences.size());
  for (size_t s = 0; s < sentences.size(); ++s)
    for (const auto& t : sentences[s])
      if (auto it = vocab.index.find(t); it != vocab.index.end()) encoded[s].push_back(it->second);

  const std::vector<double> noise = NoiseDistribution(vocab);
  const double total_work = static_cast<double>(vocab.total) * cfg.epochs + 1.0;
  const double threshold = cfg.downsample * static_cast<double>(vocab.total);
  std::atomic<int64_t> processed{0};

  auto worker = [&](int thread_id) {
    Rng rng = MakeRng(cfg.seed, 0x5eed0000ULL + static_cast<uint64_t>(thread_id));
    const size_t begin = encoded.size() * thread_id / cfg.threads;
    const size_t end = encoded.size() * (thread_id + 1) / cfg.threads;
    Eigen::RowVectorXf grad_in(dim);
    std::vector<int> kept;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (size_t s = begin; s < end; ++s) {
        kept.clear();
        for (int w : encoded[s]) {
          if (threshold > 0) {
            const double c = static_cast<double>(vocab.counts[w]);
            const double keep = (std::sqrt(c / threshold) + 1.0) * threshold / c;
            if (keep < UniformUnit(rng)) continue;
          }
          kept.push_back(w);
        }
        const int64_t done = processed.fetch_add(static_cast<int64_t>(encoded[s].size()));
        const float alpha = static_cast<float>(
            cfg.learning_rate * std::max(1.0 - static_cast<double>(done) / total_work, 1e-4));
        const int n = static_cast<int>(kept.size());
        for (int pos = 0; pos < n; ++pos) {
          const int center = kept[pos];
          const int reach = cfg.window - static_cast<int>(UniformIndex(rng, cfg.window));
          for (int c = std::max(0, pos - reach); c <= std::min(n - 1, pos + reach); ++c) {
            if (c == pos) continue;
            const int context = kept[c];
            grad_in.setZero();
            for (int d = 0; d <= cfg.negative; ++d) {
              int target;
              float label;
              if (d == 0) {
                target = context;
                label = 1.0f;
              } else {
                target = DrawNoise(noise, rng);
                if (target == context) continue;
                label = 0.0f;
              }
              const float score = input.row(center).dot(output.row(target));
              const float g = (label - Sigmoid(score)) * alpha;
              grad_in.noalias() += g * output.row(target);
              output.row(target).noalias() += g * input.row(center);
            }
            input.row(center) += grad_in;
          }
        }
      }
    }
  };

  if (cfg.threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < cfg.threads; ++t) threads.emplace_back(worker, t);
    for (auto& t : threads) t.join();
  }
  return EmbeddingTable(vocab.tokens, std::move(input));
}

std::vector<Tokens> CorpusSentences(const std::vector<Paper>& papers) {
  std::vector<Tokens> out;
  for (const auto& p : papers) {
    out.push_back(p.title.tokens);
    for (const auto& s : p.abstract) out.push_back(s.tokens);
    for (const auto& s : p.highlights) out.push_back(s.tokens);
    for (const auto& section : p.sections)
      for (const auto& s : section.sentences) out.push_back(s.tokens);
  }
  return out;
}

namespace {

void Accumulate(const Tokens& tokens, const EmbeddingTable& table, const StopwordSet& stopwords,
                Eigen::VectorXd& sum, int& count) {
  for (const auto& t : tokens) {
    if (stopwords.Contains(t)) continue;
    if (auto idx = table.Index(t)) {
      sum += table.Vector(*idx).transpose().cast<double>();
      ++count;
    }
  }
}

}  // namespace

Eigen::VectorXd SentenceVector(const Tokens& sentence, const EmbeddingTable& table,
                               const StopwordSet& stopwords) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim());
  int count = 0;
  Accumulate(sentence, table, stopwords, sum, count);
  return count == 0 ? sum : Eigen::VectorXd(sum / count);
}

Eigen::VectorXd AbstractVector(const std::vector<Sentence>& abstract, const EmbeddingTable& table,
                               const StopwordSet& stopwords) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim());
  int count = 0;
  for (const auto& s : abstract) Accumulate(s.tokens, table, stopwords, sum, count);
  return count == 0 ? sum : Eigen::VectorXd(sum / count);
}

Eigen::MatrixXd TokenSequence(const Tokens& sentence, const EmbeddingTable& table) {
  Eigen::MatrixXd seq = Eigen::MatrixXd::Zero(table.dim(), static_cast<Eigen::Index>(sentence.size()));
  for (size_t i = 0; i < sentence.size(); ++i)
    if (auto idx = table.Index(sentence[i]))
      seq.col(static_cast<Eigen::Index>(i)) = table.Vector(*idx).transpose().cast<double>();
  return seq;
}

double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double denom = a.norm() * b.norm();
  return denom > 0 ? a.dot(b) / denom : 0.0;
}

}  // namespace pubsum
