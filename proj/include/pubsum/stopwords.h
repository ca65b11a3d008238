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

#ifndef PUBSUM_STOPWORDS_H_
#define PUBSUM_STOPWORDS_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pubsum {

class StopwordSet {
 public:
  StopwordSet() = default;

  // Bundled English list (version "pubsum-en-1") of 174 words. Contractions
  // are stored as their token pieces, leaving 149 distinct entries.
  static const StopwordSet& Default();
  // One word per line; blank lines and '#' comments ignored.
  static StopwordSet FromFile(const std::string& path);
  // Default() unless PUBSUM_STOPWORDS names a file.
  static StopwordSet FromEnvironment();

  bool Contains(std::string_view token) const {
    return words_.find(std::string(token)) != words_.end();
  }
  void Insert(std::string word) { words_.insert(std::move(word)); }
  size_t size() const { return words_.size(); }
  std::vector<std::string> Sorted() const;

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace pubsum

#endif  // PUBSUM_STOPWORDS_H_
