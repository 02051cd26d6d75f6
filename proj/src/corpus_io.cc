// Copyright 2026 The Distillens Authors.
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

#include "distillens/corpus_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "distillens/errors.h"
#include "json.hpp"

namespace distillens {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::ifstream OpenInput(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::string AtLine(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

template <typename T>
bool ParseUnsigned(std::string_view text, T *value) {
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool ParseDouble(std::string_view text, double *value) {
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(*value);
}

// Reads all lines, each without its trailing newline.
std::vector<std::string> ReadLines(std::istream &in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw IoError("read failure");
  return lines;
}

std::size_t AsIndex(const nlohmann::json &obj, const char *key,
                    std::size_t line) {
  if (!obj.contains(key) || !obj[key].is_number_unsigned()) {
    throw ParseError(AtLine(line) + "field '" + key +
                         "' missing or not a non-negative integer",
                     line);
  }
  return obj[key].get<std::size_t>();
}

nlohmann::json ParseJsonLine(const std::string &text, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(AtLine(line) + "invalid JSON: " + e.what(), line);
  }
  if (!obj.is_object()) {
    throw ParseError(AtLine(line) + "record is not a JSON object", line);
  }
  return obj;
}

}  // namespace

Tokens SplitTokens(std::string_view line) {
  Tokens tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !IsSpace(line[j])) ++j;
    if (j > i) tokens.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// --- Parallel corpus -------------------------------------------------------

std::vector<Tokens> ParseSentences(std::istream &in) {
  std::vector<Tokens> sentences;
  std::size_t line_no = 0;
  for (const std::string &line : ReadLines(in)) {
    ++line_no;
    Tokens tokens = SplitTokens(line);
    if (tokens.empty()) {
      throw ParseError(AtLine(line_no) + "empty sentence", line_no);
    }
    sentences.push_back(std::move(tokens));
  }
  return sentences;
}

std::vector<Tokens> ReadSentences(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseSentences(in);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.token());
  }
}

void WriteSentences(std::ostream &out, std::span<const Tokens> sentences) {
  for (const Tokens &s : sentences) out << JoinTokens(s) << '\n';
}

namespace {

ParallelCorpus Zip(std::vector<Tokens> source, std::vector<Tokens> target) {
  if (source.size() != target.size()) {
    throw LineCountMismatch(
        "line count mismatch: source has " + std::to_string(source.size()) +
            " lines, target has " + std::to_string(target.size()),
        source.size(), target.size());
  }
  ParallelCorpus corpus;
  corpus.pairs.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    corpus.pairs.push_back({std::move(source[i]), std::move(target[i])});
  }
  return corpus;
}

}  // namespace

ParallelCorpus ParseParallelCorpus(std::istream &source, std::istream &target) {
  return Zip(ParseSentences(source), ParseSentences(target));
}

ParallelCorpus ReadParallelCorpus(const std::filesystem::path &source_path,
                                  const std::filesystem::path &target_path) {
  std::vector<Tokens> source = ReadSentences(source_path);
  std::vector<Tokens> target = ReadSentences(target_path);
  try {
    return Zip(std::move(source), std::move(target));
  } catch (const LineCountMismatch &e) {
    throw LineCountMismatch(source_path.string() + " vs " +
                                target_path.string() + ": " + e.what(),
                            e.source_lines(), e.target_lines());
  }
}

// --- Alignments --------------------------------------------------------------

Alignment::Alignment(std::vector<Link> links) : links_(std::move(links)) {
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
}

bool Alignment::Contains(Link link) const {
  return std::binary_search(links_.begin(), links_.end(), link);
}

void Alignment::Validate(const SentencePair &pair) const {
  Validate(pair.source.size(), pair.target.size());
}

void Alignment::Validate(std::size_t source_length,
                         std::size_t target_length) const {
  for (const Link &l : links_) {
    if (l.source >= source_length || l.target >= target_length) {
      throw DomainError("alignment link " + std::to_string(l.source) + "-" +
                        std::to_string(l.target) + " out of bounds for " +
                        std::to_string(source_length) + "x" +
                        std::to_string(target_length) + " sentence pair");
    }
  }
}

Alignment ParsePharaoh(std::string_view line) {
  std::vector<Link> links;
  std::size_t token_no = 0;
  for (const std::string &token : SplitTokens(line)) {
    ++token_no;
    const std::size_t dash = token.find('-');
    Link link;
    if (dash == std::string::npos ||
        !ParseUnsigned(std::string_view(token).substr(0, dash), &link.source) ||
        !ParseUnsigned(std::string_view(token).substr(dash + 1),
                       &link.target)) {
      throw ParseError("malformed alignment token '" + token + "' at token " +
                           std::to_string(token_no),
                       0, token_no);
    }
    links.push_back(link);
  }
  return Alignment(std::move(links));
}

std::string FormatPharaoh(const Alignment &alignment) {
  std::string out;
  for (const Link &l : alignment.links()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.source);
    out += '-';
    out += std::to_string(l.target);
  }
  return out;
}

std::vector<Alignment> ParseAlignments(std::istream &in) {
  std::vector<Alignment> alignments;
  std::size_t line_no = 0;
  for (const std::string &line : ReadLines(in)) {
    ++line_no;
    try {
      alignments.push_back(ParsePharaoh(line));
    } catch (const ParseError &e) {
      throw ParseError(AtLine(line_no) + e.what(), line_no, e.token());
    }
  }
  return alignments;
}

std::vector<Alignment> ReadAlignments(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseAlignments(in);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.token());
  }
}

void WriteAlignments(std::ostream &out, std::span<const Alignment> alignments) {
  for (const Alignment &a : alignments) out << FormatPharaoh(a) << '\n';
}

void ValidateAlignments(const ParallelCorpus &corpus,
                        std::span<const Alignment> alignments) {
  if (alignments.size() != corpus.size()) {
    throw DomainError("alignment count " + std::to_string(alignments.size()) +
                      " does not match corpus size " +
                      std::to_string(corpus.size()));
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      alignments[i].Validate(corpus[i]);
    } catch (const DomainError &e) {
      throw DomainError("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

// --- K-best lists ------------------------------------------------------------

KBestMap ParseKBest(std::istream &in, std::size_t max_entries) {
  static constexpr std::string_view kSep = "|||";
  KBestMap lists;
  std::size_t line_no = 0;
  std::optional<std::size_t> last_id;
  for (const std::string &raw : ReadLines(in)) {
    ++line_no;
    const std::string_view line = raw;
    if (Trim(line).empty()) continue;
    const std::size_t s1 = line.find(kSep);
    const std::size_t s2 =
        s1 == std::string_view::npos ? s1 : line.find(kSep, s1 + kSep.size());
    if (s2 == std::string_view::npos ||
        line.find(kSep, s2 + kSep.size()) != std::string_view::npos) {
      throw ParseError(AtLine(line_no) + "expected 'id ||| tokens ||| logprob'",
                       line_no);
    }
    std::size_t id = 0;
    if (!ParseUnsigned(Trim(line.substr(0, s1)), &id)) {
      throw ParseError(AtLine(line_no) + "invalid sentence id", line_no);
    }
    if (last_id && id < *last_id) {
      throw ParseError(AtLine(line_no) + "sentence id " + std::to_string(id) +
                           " after " + std::to_string(*last_id) +
                           "; ids must be non-decreasing",
                       line_no);
    }
    KBestEntry entry;
    entry.hypothesis = SplitTokens(
        line.substr(s1 + kSep.size(), s2 - s1 - kSep.size()));
    if (entry.hypothesis.empty()) {
      throw ParseError(AtLine(line_no) + "empty hypothesis", line_no);
    }
    if (!ParseDouble(Trim(line.substr(s2 + kSep.size())), &entry.nmt_logprob)) {
      throw ParseError(AtLine(line_no) + "unparsable log-probability", line_no);
    }
    if (entry.nmt_logprob > 0.0) {
      throw ParseError(AtLine(line_no) + "log-probability must be <= 0",
                       line_no);
    }
    KBestList &list = lists[id];
    list.sentence_id = id;
    if (max_entries != 0 && list.entries.size() == max_entries) {
      throw ParseError(AtLine(line_no) + "more than " +
                           std::to_string(max_entries) +
                           " hypotheses for sentence " + std::to_string(id),
                       line_no);
    }
    list.entries.push_back(std::move(entry));
    last_id = id;
  }
  return lists;
}

KBestMap ReadKBest(const std::filesystem::path &path, std::size_t max_entries) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseKBest(in, max_entries);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.token());
  }
}

void WriteKBest(std::ostream &out, const KBestMap &lists) {
  for (const auto &[id, list] : lists) {
    for (const KBestEntry &e : list.entries) {
      out << id << " ||| " << JoinTokens(e.hypothesis)
          << " ||| " << FormatDouble(e.nmt_logprob) << '\n';
    }
  }
}

// --- Model exports -----------------------------------------------------------

std::vector<TokenPredictionRecord> ParseTokenPredictions(std::istream &in) {
  std::vector<TokenPredictionRecord> records;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t line_no = 0;
  for (const std::string &line : ReadLines(in)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const nlohmann::json obj = ParseJsonLine(line, line_no);
    TokenPredictionRecord r;
    r.sentence_id = AsIndex(obj, "sentence_id", line_no);
    r.position = AsIndex(obj, "position", line_no);
    if (!obj.contains("token") || !obj["token"].is_string()) {
      throw ParseError(AtLine(line_no) + "field 'token' missing", line_no);
    }
    r.token = obj["token"].get<std::string>();
    if (!obj.contains("probability") || !obj["probability"].is_number()) {
      throw ParseError(AtLine(line_no) + "field 'probability' missing",
                       line_no);
    }
    r.probability = obj["probability"].get<double>();
    if (!(r.probability >= 0.0 && r.probability <= 1.0)) {
      throw ParseError(AtLine(line_no) + "probability " +
                           FormatDouble(r.probability) + " outside [0,1]",
                       line_no);
    }
    if (obj.contains("correct") && !obj["correct"].is_null()) {
      if (!obj["correct"].is_boolean()) {
        throw ParseError(AtLine(line_no) + "field 'correct' is not boolean",
                         line_no);
      }
      r.correct = obj["correct"].get<bool>();
    }
    if (!seen.emplace(r.sentence_id, r.position).second) {
      throw ParseError(AtLine(line_no) + "duplicate position " +
                           std::to_string(r.position) + " in sentence " +
                           std::to_string(r.sentence_id),
                       line_no);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TokenPredictionRecord> ReadTokenPredictions(
    const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseTokenPredictions(in);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.token());
  }
}

void WriteTokenPredictions(std::ostream &out,
                           std::span<const TokenPredictionRecord> records) {
  for (const TokenPredictionRecord &r : records) {
    nlohmann::ordered_json obj;
    obj["sentence_id"] = r.sentence_id;
    obj["position"] = r.position;
    obj["token"] = r.token;
    obj["probability"] = r.probability;
    if (r.correct) obj["correct"] = *r.correct;
    out << obj.dump() << '\n';
  }
}

std::vector<AttentionRecord> ParseAttention(std::istream &in) {
  std::vector<AttentionRecord> records;
  std::size_t line_no = 0;
  for (const std::string &line : ReadLines(in)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const nlohmann::json obj = ParseJsonLine(line, line_no);
    AttentionRecord r;
    r.sentence_id = AsIndex(obj, "sentence_id", line_no);
    r.iteration = AsIndex(obj, "iteration", line_no);
    r.head = AsIndex(obj, "head", line_no);
    r.rows = AsIndex(obj, "rows", line_no);
    r.cols = AsIndex(obj, "cols", line_no);
    if (r.iteration < 1) {
      throw ParseError(AtLine(line_no) + "iteration must be >= 1", line_no);
    }
    if (r.rows == 0 || r.cols == 0) {
      throw ParseError(AtLine(line_no) + "empty attention matrix", line_no);
    }
    if (!obj.contains("weights") || !obj["weights"].is_array() ||
        obj["weights"].size() != r.rows * r.cols) {
      throw ParseError(AtLine(line_no) + "'weights' must hold rows*cols = " +
                           std::to_string(r.rows * r.cols) + " numbers",
                       line_no);
    }
    r.weights.reserve(r.rows * r.cols);
    for (const auto &w : obj["weights"]) {
      if (!w.is_number()) {
        throw ParseError(AtLine(line_no) + "non-numeric attention weight",
                         line_no);
      }
      const double v = w.get<double>();
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ParseError(AtLine(line_no) + "negative attention weight",
                         line_no);
      }
      r.weights.push_back(v);
    }
    for (std::size_t t = 0; t < r.rows; ++t) {
      double sum = 0.0;
      for (double v : r.row(t)) sum += v;
      // The small slack absorbs binary rounding of decimal inputs.
      if (std::abs(sum - 1.0) > kAttentionRowTolerance + 1e-12) {
        throw ParseError(AtLine(line_no) + "attention row " +
                             std::to_string(t) + " sums to " +
                             FormatDouble(sum),
                         line_no);
      }
      for (std::size_t s = 0; s < r.cols; ++s) r.weights[t * r.cols + s] /= sum;
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AttentionRecord> ReadAttention(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseAttention(in);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.token());
  }
}

void WriteAttention(std::ostream &out,
                    std::span<const AttentionRecord> records) {
  for (const AttentionRecord &r : records) {
    nlohmann::ordered_json obj;
    obj["sentence_id"] = r.sentence_id;
    obj["iteration"] = r.iteration;
    obj["head"] = r.head;
    obj["rows"] = r.rows;
    obj["cols"] = r.cols;
    obj["weights"] = r.weights;
    out << obj.dump() << '\n';
  }
}

}  // namespace distillens
