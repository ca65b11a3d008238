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

#ifndef PUBSUM_ROUGE_H_
#define PUBSUM_ROUGE_H_

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "pubsum/corpus.h"

namespace pubsum {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

struct RougeConfig {
  // F-measure weight; 1 gives the harmonic mean of precision and recall.
  double beta = 1.0;
};

// Length of a longest common subsequence. O(|a|*|b|) time and
// O(min(|a|,|b|)) memory.
template <typename T>
size_t LcsLength(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  std::vector<size_t> row(b.size() + 1, 0);
  for (const T& x : a) {
    size_t diag = 0;  // row[j-1] from the previous pass
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t above = row[j];
      row[j] = (x == b[j - 1]) ? diag + 1 : std::max(above, row[j - 1]);
      diag = above;
    }
  }
  return row.back();
}

inline size_t LcsLength(const Tokens& a, const Tokens& b) {
  return LcsLength<std::string>(std::span<const std::string>(a),
                                std::span<const std::string>(b));
}

// Combines an LCS length with sequence lengths; zero when either is empty.
RougeScore RougeFromLcs(size_t lcs, size_t candidate_len, size_t reference_len,
                        const RougeConfig& cfg = {});

RougeScore RougeL(const Tokens& candidate, const Tokens& reference,
                  const RougeConfig& cfg = {});

// Scores against the in-order concatenation of `references`. Throws on an
// empty reference list.
RougeScore RougeLMulti(const Tokens& candidate, const std::vector<Tokens>& references,
                       const RougeConfig& cfg = {});

Tokens Concatenate(const std::vector<Tokens>& parts);
Tokens Concatenate(const std::vector<Sentence>& sentences);

}  // namespace pubsum

#endif  // PUBSUM_ROUGE_H_
