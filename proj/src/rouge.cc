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

#include "pubsum/rouge.h"

namespace pubsum {

RougeScore RougeFromLcs(size_t lcs, size_t candidate_len, size_t reference_len,
                        const RougeConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw Error("rouge: beta must be positive");
  RougeScore score;
  if (lcs == 0 || candidate_len == 0 || reference_len == 0) return score;
  score.precision = static_cast<double>(lcs) / static_cast<double>(candidate_len);
  score.recall = static_cast<double>(lcs) / static_cast<double>(reference_len);
  const double b2 = cfg.beta * cfg.beta;
  score.f_score = (1.0 + b2) * score.precision * score.recall /
                  (score.recall + b2 * score.precision);
  return score;
}

RougeScore RougeL(const Tokens& candidate, const Tokens& reference, const RougeConfig& cfg) {
  return RougeFromLcs(LcsLength(candidate, reference), candidate.size(), reference.size(), cfg);
}

RougeScore RougeLMulti(const Tokens& candidate, const std::vector<Tokens>& references,
                       const RougeConfig& cfg) {
  if (references.empty()) throw Error("rouge_l_multi: empty reference list");
  return RougeL(candidate, Concatenate(references), cfg);
}

Tokens Concatenate(const std::vector<Tokens>& parts) {
  Tokens out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Tokens Concatenate(const std::vector<Sentence>& sentences) {
  Tokens out;
  for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  return out;
}

}  // namespace pubsum
