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

// Corpus-level data complexity measures computed from word alignments:
//
//   FRS   mean fuzzy reordering score; 1 means every sentence is monotone.
//   LD    mean over source types x of the entropy H(y | x) of the target
//         words aligned to x.
//   F     mean over source types x of KL(p_real(.|x) || p_distilled(.|x)),
//         measuring how far a corpus drifted from a reference corpus.
//
// Entropies and divergences are in nats.

#ifndef DISTILLENS_COMPLEXITY_H_
#define DISTILLENS_COMPLEXITY_H_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "distillens/corpus_io.h"

namespace distillens {

// Link counts c(x, y) and the conditional distribution p(y | x) they induce.
class ConditionalTable {
 public:
  using Row = std::map<std::string, double, std::less<>>;

  void Add(std::string_view source, std::string_view target,
           double count = 1.0);

  double Count(std::string_view source, std::string_view target) const;
  // Sum of counts for `source`; 0 if unseen.
  double Total(std::string_view source) const;
  double Probability(std::string_view source, std::string_view target) const;

  // nullptr when `source` has no counts.
  const Row *Find(std::string_view source) const;
  // Source vocabulary size |V_x|.
  std::size_t SourceCount() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Sorted by source word.
  const std::map<std::string, Row, std::less<>> &rows() const { return rows_; }

 private:
  std::map<std::string, Row, std::less<>> rows_;
  std::map<std::string, double, std::less<>> totals_;
};

struct ComplexityReport {
  double frs = 1.0;
  double lexical_diversity = 0.0;
  double faithfulness = 0.0;
  std::size_t sentence_count = 0;
};

inline constexpr double kDefaultFaithfulnessAlpha = 0.01;

// Fuzzy reordering score of one sentence. Each aligned target position j is
// reduced to its leftmost source index a(j); unaligned positions are
// skipped. Scanning j left to right, a new chunk starts whenever
// a(j) != a(j_prev) + 1. With C chunks over M aligned positions the score is
// 1 - (C - 1) / (M - 1), and 1 when M <= 1.
double SentenceFrs(const Alignment &alignment, std::size_t target_length);

// Unweighted mean of SentenceFrs. Throws DomainError on a size mismatch.
double CorpusFrs(const ParallelCorpus &corpus,
                 std::span<const Alignment> alignments);

// One count per link (i, j) on (source[i], target[j]).
ConditionalTable ConditionalDistribution(const ParallelCorpus &corpus,
                                         std::span<const Alignment> alignments);

// Throws DomainError if the table is empty.
double LexicalDiversity(const ConditionalTable &table);

// Mean over real-table sources of KL(p_r(.|x) || q(.|x)), where q is the
// distilled distribution with `alpha` added to every probability over the
// union support U_x and renormalized:
//   q(y|x) = (p_d(y|x) + alpha) / (1 + alpha |U_x|).
// Sources missing from the distilled table use the uniform distribution over
// U_x. Throws DomainError for alpha <= 0 or an empty real table.
double Faithfulness(const ConditionalTable &real_table,
                    const ConditionalTable &distilled_table,
                    double alpha = kDefaultFaithfulnessAlpha);

// All three measures for `corpus`. Faithfulness is taken against
// `reference` when given, otherwise against the corpus itself.
ComplexityReport ComputeComplexity(const ParallelCorpus &corpus,
                                   std::span<const Alignment> alignments,
                                   const ConditionalTable *reference = nullptr,
                                   double alpha = kDefaultFaithfulnessAlpha);

}  // namespace distillens

#endif  // DISTILLENS_COMPLEXITY_H_
