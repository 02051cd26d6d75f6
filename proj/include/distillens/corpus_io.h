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

// In-memory data model and text formats: parallel corpora, Pharaoh
// alignments, k-best lists, and exported token predictions / attention
// matrices.
//
// Every parser validates what it can see locally. Alignment bounds depend
// on the sentence pair they belong to and are checked by
// Alignment::Validate once the two are joined.

#ifndef DISTILLENS_CORPUS_IO_H_
#define DISTILLENS_CORPUS_IO_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace distillens {

using Tokens = std::vector<std::string>;

struct SentencePair {
  Tokens source;
  Tokens target;

  bool operator==(const SentencePair &) const = default;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  const SentencePair &operator[](std::size_t i) const { return pairs[i]; }

  bool operator==(const ParallelCorpus &) const = default;
};

// A single alignment link between source position `source` and target
// position `target`, both 0-based.
struct Link {
  std::uint32_t source = 0;
  std::uint32_t target = 0;

  auto operator<=>(const Link &) const = default;
};

// Set of links for one sentence pair, kept sorted by (source, target) and
// free of duplicates.
class Alignment {
 public:
  Alignment() = default;
  // Sorts and deduplicates.
  explicit Alignment(std::vector<Link> links);

  std::span<const Link> links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  bool Contains(Link link) const;

  // Throws DomainError if any link falls outside the pair.
  void Validate(const SentencePair &pair) const;
  void Validate(std::size_t source_length, std::size_t target_length) const;

  bool operator==(const Alignment &) const = default;

 private:
  std::vector<Link> links_;
};

struct KBestEntry {
  Tokens hypothesis;
  double nmt_logprob = 0.0;  // natural log, <= 0

  bool operator==(const KBestEntry &) const = default;
};

struct KBestList {
  std::size_t sentence_id = 0;
  std::vector<KBestEntry> entries;  // rank order

  bool operator==(const KBestList &) const = default;
};

using KBestMap = std::map<std::size_t, KBestList>;

struct TokenPredictionRecord {
  std::size_t sentence_id = 0;
  std::size_t position = 0;
  std::string token;
  double probability = 0.0;
  std::optional<bool> correct;

  bool operator==(const TokenPredictionRecord &) const = default;
};

// Source-target attention of one head at one decoding iteration: `rows`
// target positions by `cols` source positions, row-major.
struct AttentionRecord {
  std::size_t sentence_id = 0;
  std::size_t iteration = 1;
  std::size_t head = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(weights).subspan(r * cols, cols);
  }
};

// Tolerance on attention row sums; rows within it are renormalized.
inline constexpr double kAttentionRowTolerance = 1e-4;

// Splits on ASCII whitespace, dropping empty fields.
Tokens SplitTokens(std::string_view line);
std::string JoinTokens(std::span<const std::string> tokens);

// --- Parallel corpus -------------------------------------------------------

ParallelCorpus ParseParallelCorpus(std::istream &source, std::istream &target);
ParallelCorpus ReadParallelCorpus(const std::filesystem::path &source_path,
                                  const std::filesystem::path &target_path);
// One tokenized sentence per line; empty lines are an error.
std::vector<Tokens> ParseSentences(std::istream &in);
std::vector<Tokens> ReadSentences(const std::filesystem::path &path);
void WriteSentences(std::ostream &out, std::span<const Tokens> sentences);

// --- Alignments --------------------------------------------------------------

// Parses a Pharaoh line of `i-j` tokens. The ParseError carries the 1-based
// token offset of the first malformed token.
Alignment ParsePharaoh(std::string_view line);
std::string FormatPharaoh(const Alignment &alignment);
std::vector<Alignment> ParseAlignments(std::istream &in);
std::vector<Alignment> ReadAlignments(const std::filesystem::path &path);
void WriteAlignments(std::ostream &out, std::span<const Alignment> alignments);

// Throws DomainError unless there is one valid alignment per pair.
void ValidateAlignments(const ParallelCorpus &corpus,
                        std::span<const Alignment> alignments);

// --- K-best lists ------------------------------------------------------------

// Lines are `id ||| tokens ||| logprob`; ids must be non-decreasing.
// `max_entries` of 0 leaves the list size unbounded.
KBestMap ParseKBest(std::istream &in, std::size_t max_entries = 0);
KBestMap ReadKBest(const std::filesystem::path &path,
                   std::size_t max_entries = 0);
void WriteKBest(std::ostream &out, const KBestMap &lists);

// --- Model exports -----------------------------------------------------------

// JSON Lines, one object per line:
//   {"sentence_id":0,"position":0,"token":"the","probability":0.8,
//    "correct":true}
// `correct` may be absent or null.
std::vector<TokenPredictionRecord> ParseTokenPredictions(std::istream &in);
std::vector<TokenPredictionRecord> ReadTokenPredictions(
    const std::filesystem::path &path);
void WriteTokenPredictions(std::ostream &out,
                           std::span<const TokenPredictionRecord> records);

// JSON Lines, one object per line:
//   {"sentence_id":0,"iteration":1,"head":0,"rows":2,"cols":3,
//    "weights":[0.6,0.3,0.1,0.2,0.5,0.3]}
// Rows whose sum is within kAttentionRowTolerance of 1 are renormalized.
std::vector<AttentionRecord> ParseAttention(std::istream &in);
std::vector<AttentionRecord> ReadAttention(const std::filesystem::path &path);
void WriteAttention(std::ostream &out, std::span<const AttentionRecord> records);

// Formats a double so that parsing it back yields the same value.
std::string FormatDouble(double value);

}  // namespace distillens

#endif  // DISTILLENS_CORPUS_IO_H_
