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

#ifndef PUBSUM_CORPUS_H_
#define PUBSUM_CORPUS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pubsum/error.h"

namespace pubsum {

using Tokens = std::vector<std::string>;

// Structural region of a paper. The integer values are the Location feature.
enum class LocationCategory : int {
  kHighlight = 0,
  kAbstract = 1,
  kIntroduction = 2,
  kResultsDiscussionAnalysis = 3,
  kMethod = 4,
  kConclusion = 5,
  kOther = 6,
};

inline constexpr int kNumLocationCategories = 7;

inline constexpr std::array<LocationCategory, kNumLocationCategories>
    kAllLocationCategories = {
        LocationCategory::kHighlight,    LocationCategory::kAbstract,
        LocationCategory::kIntroduction, LocationCategory::kResultsDiscussionAnalysis,
        LocationCategory::kMethod,       LocationCategory::kConclusion,
        LocationCategory::kOther,
};

// "Highlight", "Abstract", "Introduction", "ResultsDiscussionAnalysis",
// "Method", "Conclusion", "Other".
std::string_view CategoryName(LocationCategory category);
std::optional<LocationCategory> ParseCategoryName(std::string_view name);

// Lowercases ASCII and splits on every character that is not alphanumeric.
// A hyphen between two alphanumerics is kept ("state-of-the-art"), as is a
// '.' between two digits so decimals stay whole ("0.93"). Bytes >= 0x80 are
// treated as word characters so UTF-8 words survive intact.
Tokens Tokenize(std::string_view text);

struct Sentence {
  Tokens tokens;
  std::string raw_text;
  int index_in_section = 0;

  static Sentence FromText(std::string text, int index_in_section);
};

struct Section {
  std::string raw_heading;
  LocationCategory category = LocationCategory::kOther;
  std::vector<Sentence> sentences;
};

struct Paper {
  std::string id;
  Sentence title;
  std::vector<Sentence> abstract;
  std::vector<Sentence> highlights;
  std::vector<std::string> keywords;
  std::vector<Section> sections;

  size_t NumBodySentences() const;
};

// Position of a body sentence inside a paper.
struct BodyRef {
  int section = 0;
  int sentence = 0;

  friend auto operator<=>(const BodyRef&, const BodyRef&) = default;
};

// Body sentences in document order.
std::vector<BodyRef> BodySentences(const Paper& paper);
const Sentence& At(const Paper& paper, BodyRef ref);

// Maps section headings to location categories. Lookup is case-insensitive
// and ignores numbering prefixes such as "3.", "3.1" or "IV.". A heading
// matches an entry when the entry's words occur contiguously in it; the
// longest matching entry wins, then the earliest one.
class Gazetteer {
 public:
  Gazetteer() = default;

  static const Gazetteer& Default();
  // Two-column TSV: pattern <tab> category name. '#' starts a comment line.
  static Gazetteer FromTsv(std::istream& in);
  static Gazetteer FromFile(const std::string& path);

  void Add(std::string_view pattern, LocationCategory category);
  LocationCategory Classify(std::string_view raw_heading) const;

 private:
  struct Entry {
    Tokens pattern;
    LocationCategory category;
  };
  std::vector<Entry> entries_;
};

// Removes leading section numbering ("4.", "2.3", "IV.") and trims.
std::string StripHeadingNumbering(std::string_view heading);

inline LocationCategory ClassifyHeading(std::string_view raw_heading,
                                        const Gazetteer& gazetteer = Gazetteer::Default()) {
  return gazetteer.Classify(raw_heading);
}

// Checks the non-empty guarantees; throws Error naming the paper id.
void ValidatePaper(const Paper& paper);

// Parses one JSON Lines record. `line_number` is only used in messages.
Paper ParsePaperJson(std::string_view line, size_t line_number,
                     const Gazetteer& gazetteer = Gazetteer::Default());
std::string PaperToJson(const Paper& paper);

std::vector<Paper> ReadCorpus(std::istream& in,
                              const Gazetteer& gazetteer = Gazetteer::Default());
std::vector<Paper> LoadCorpus(const std::string& path,
                              const Gazetteer& gazetteer = Gazetteer::Default());
void WriteCorpus(std::ostream& out, const std::vector<Paper>& papers);
void SaveCorpus(const std::string& path, const std::vector<Paper>& papers);

}  // namespace pubsum

#endif  // PUBSUM_CORPUS_H_
