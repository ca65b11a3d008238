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

#include "pubsum/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pubsum {
namespace {

using json = nlohmann::ordered_json;

bool IsWordByte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool IsDigit(unsigned char c) { return c >= '0' && c <= '9'; }

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

constexpr std::array<std::string_view, kNumLocationCategories> kCategoryNames = {
    "Highlight", "Abstract", "Introduction", "ResultsDiscussionAnalysis",
    "Method",    "Conclusion", "Other",
};

[[noreturn]] void FieldError(size_t line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

std::string RequireString(const json& obj, const char* field, size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) FieldError(line, std::string("missing field '") + field + "'");
  if (!it->is_string()) FieldError(line, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> RequireStringArray(const json& obj, const char* field,
                                            size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) FieldError(line, std::string("missing field '") + field + "'");
  if (!it->is_array()) FieldError(line, std::string("field '") + field + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string())
      FieldError(line, std::string("field '") + field + "' must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<Sentence> ToSentences(std::vector<std::string> texts) {
  std::vector<Sentence> out;
  out.reserve(texts.size());
  for (size_t i = 0; i < texts.size(); ++i)
    out.push_back(Sentence::FromText(std::move(texts[i]), static_cast<int>(i)));
  return out;
}

void CheckSentences(const Paper& paper, const std::vector<Sentence>& sentences,
                    const std::string& where) {
  for (size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].tokens.empty())
      throw Error("paper '" + paper.id + "': " + where + "[" + std::to_string(i) +
                  "] has no tokens");
  }
}

}  // namespace

std::string_view CategoryName(LocationCategory category) {
  return kCategoryNames.at(static_cast<size_t>(category));
}

std::optional<LocationCategory> ParseCategoryName(std::string_view name) {
  for (size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<LocationCategory>(i);
  }
  return std::nullopt;
}

Tokens Tokenize(std::string_view text) {
  Tokens tokens;
  std::string current;
  const size_t n = text.size();
  for (size_t i = 0; i < n; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsWordByte(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
      continue;
    }
    if (!current.empty() && i + 1 < n) {
      const auto prev = static_cast<unsigned char>(text[i - 1]);
      const auto next = static_cast<unsigned char>(text[i + 1]);
      if (c == '-' && IsWordByte(prev) && IsWordByte(next)) {
        current.push_back('-');
        continue;
      }
      if (c == '.' && IsDigit(prev) && IsDigit(next)) {
        current.push_back('.');
        continue;
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Sentence Sentence::FromText(std::string text, int index_in_section) {
  Sentence s;
  s.tokens = Tokenize(text);
  s.raw_text = std::move(text);
  s.index_in_section = index_in_section;
  return s;
}

size_t Paper::NumBodySentences() const {
  size_t n = 0;
  for (const auto& section : sections) n += section.sentences.size();
  return n;
}

std::vector<BodyRef> BodySentences(const Paper& paper) {
  std::vector<BodyRef> refs;
  refs.reserve(paper.NumBodySentences());
  for (size_t s = 0; s < paper.sections.size(); ++s) {
    for (size_t i = 0; i < paper.sections[s].sentences.size(); ++i)
      refs.push_back({static_cast<int>(s), static_cast<int>(i)});
  }
  return refs;
}

const Sentence& At(const Paper& paper, BodyRef ref) {
  return paper.sections.at(ref.section).sentences.at(ref.sentence);
}

// --- Gazetteer ---------------------------------------------------------------

const Gazetteer& Gazetteer::Default() {
  static const Gazetteer kDefault = [] {
    using C = LocationCategory;
    Gazetteer g;
    for (auto p : {"introduction", "background"}) g.Add(p, C::kIntroduction);
    for (auto p : {"results", "discussion", "analysis", "evaluation", "experiments"})
      g.Add(p, C::kResultsDiscussionAnalysis);
    for (auto p : {"method", "methods", "approach", "model", "design", "implementation"})
      g.Add(p, C::kMethod);
    for (auto p : {"conclusion", "conclusions", "summary", "future work"})
      g.Add(p, C::kConclusion);
    return g;
  }();
  return kDefault;
}

Gazetteer Gazetteer::FromTsv(std::istream& in) {
  Gazetteer g;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("gazetteer line " + std::to_string(line_number) + ": expected two tab-separated columns");
    const std::string category_name = Trim(std::string_view(line).substr(tab + 1));
    const auto category = ParseCategoryName(category_name);
    if (!category)
      throw Error("gazetteer line " + std::to_string(line_number) + ": unknown category '" +
                  category_name + "'");
    g.Add(std::string_view(line).substr(0, tab), *category);
  }
  return g;
}

Gazetteer Gazetteer::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open gazetteer file '" + path + "'");
  return FromTsv(in);
}

void Gazetteer::Add(std::string_view pattern, LocationCategory category) {
  Tokens tokens = Tokenize(pattern);
  if (tokens.empty()) throw Error("gazetteer pattern '" + std::string(pattern) + "' has no words");
  entries_.push_back({std::move(tokens), category});
}

std::string StripHeadingNumbering(std::string_view heading) {
  std::string h = Trim(heading);
  size_t i = 0;
  // Arabic: 3  3.  3.1  3.1.2.
  while (i < h.size() && (IsDigit(h[i]) || (h[i] == '.' && i > 0))) ++i;
  if (i > 0 && (i == h.size() || h[i - 1] == '.' ||
                !std::isalpha(static_cast<unsigned char>(h[i])))) {
    return Trim(std::string_view(h).substr(i));
  }
  // Roman: IV.
  i = 0;
  while (i < h.size() && std::string_view("ivxlcdmIVXLCDM").find(h[i]) != std::string_view::npos) ++i;
  if (i > 0 && i < h.size() && h[i] == '.') return Trim(std::string_view(h).substr(i + 1));
  return h;
}

LocationCategory Gazetteer::Classify(std::string_view raw_heading) const {
  const Tokens heading = Tokenize(StripHeadingNumbering(raw_heading));
  const Entry* best = nullptr;
  for (const auto& entry : entries_) {
    if (entry.pattern.size() > heading.size()) continue;
    if (best && entry.pattern.size() <= best->pattern.size()) continue;
    auto it = std::search(heading.begin(), heading.end(), entry.pattern.begin(),
                          entry.pattern.end());
    if (it != heading.end()) best = &entry;
  }
  return best ? best->category : LocationCategory::kOther;
}

// --- JSON Lines --------------------------------------------------------------

void ValidatePaper(const Paper& paper) {
  const std::string who = "paper '" + paper.id + "': ";
  if (paper.id.empty()) throw Error("paper with empty id");
  if (paper.title.tokens.empty()) throw Error(who + "title must be non-empty");
  if (paper.abstract.empty()) throw Error(who + "abstract must be non-empty");
  if (paper.highlights.empty()) throw Error(who + "highlights must be non-empty");
  if (paper.keywords.empty()) throw Error(who + "keywords must be non-empty");
  CheckSentences(paper, paper.abstract, "abstract");
  CheckSentences(paper, paper.highlights, "highlights");
  for (size_t s = 0; s < paper.sections.size(); ++s)
    CheckSentences(paper, paper.sections[s].sentences,
                   "sections[" + std::to_string(s) + "].sentences");
}

Paper ParsePaperJson(std::string_view line, size_t line_number, const Gazetteer& gazetteer) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    FieldError(line_number, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) FieldError(line_number, "record must be a JSON object");

  Paper paper;
  paper.id = RequireString(obj, "id", line_number);
  paper.title = Sentence::FromText(RequireString(obj, "title", line_number), 0);
  paper.abstract = ToSentences(RequireStringArray(obj, "abstract", line_number));
  paper.highlights = ToSentences(RequireStringArray(obj, "highlights", line_number));
  paper.keywords = RequireStringArray(obj, "keywords", line_number);

  auto sections = obj.find("sections");
  if (sections == obj.end()) FieldError(line_number, "missing field 'sections'");
  if (!sections->is_array()) FieldError(line_number, "field 'sections' must be an array");
  for (const auto& entry : *sections) {
    if (!entry.is_object()) FieldError(line_number, "each section must be an object");
    Section section;
    section.raw_heading = RequireString(entry, "heading", line_number);
    section.category = gazetteer.Classify(section.raw_heading);
    section.sentences = ToSentences(RequireStringArray(entry, "sentences", line_number));
    paper.sections.push_back(std::move(section));
  }
  ValidatePaper(paper);
  return paper;
}

std::string PaperToJson(const Paper& paper) {
  auto texts = [](const std::vector<Sentence>& sentences) {
    json arr = json::array();
    for (const auto& s : sentences) arr.push_back(s.raw_text);
    return arr;
  };
  json obj;
  obj["id"] = paper.id;
  obj["title"] = paper.title.raw_text;
  obj["abstract"] = texts(paper.abstract);
  obj["highlights"] = texts(paper.highlights);
  obj["keywords"] = paper.keywords;
  json sections = json::array();
  for (const auto& section : paper.sections) {
    json s;
    s["heading"] = section.raw_heading;
    s["sentences"] = texts(section.sentences);
    sections.push_back(std::move(s));
  }
  obj["sections"] = std::move(sections);
  return obj.dump();
}

std::vector<Paper> ReadCorpus(std::istream& in, const Gazetteer& gazetteer) {
  std::vector<Paper> papers;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    papers.push_back(ParsePaperJson(line, line_number, gazetteer));
  }
  return papers;
}

std::vector<Paper> LoadCorpus(const std::string& path, const Gazetteer& gazetteer) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return ReadCorpus(in, gazetteer);
}

void WriteCorpus(std::ostream& out, const std::vector<Paper>& papers) {
  for (const auto& paper : papers) out << PaperToJson(paper) << '\n';
}

void SaveCorpus(const std::string& path, const std::vector<Paper>& papers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path + "'");
  WriteCorpus(out, papers);
}

}  // namespace pubsum
