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

// Word alignment with IBM Model 1.
//
// Training runs EM over the corpus with a NULL word prepended to every source
// sentence:
//
//   E: c(x_i, y_j) += t(y_j | x_i) / sum_{i'} t(y_j | x_i')
//   M: t(y | x) = c(x, y) / sum_{y'} c(x, y')
//
// t(.|x) starts uniform over the target types that co-occur with x. The
// per-sentence posteriors are computed in parallel and reduced serially in
// (sentence, target position, source position) order, so tables are
// bit-identical for any thread count.

#ifndef DISTILLENS_ALIGNER_H_
#define DISTILLENS_ALIGNER_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "distillens/corpus_io.h"

namespace distillens {

// Source-side symbol for the empty word.
inline constexpr std::string_view kNullToken = "<NULL>";

// Stand-in for zero or unknown translation probabilities.
inline constexpr double kProbabilityFloor = 1e-12;

// Word translation probabilities t(y | x).
class TranslationTable {
 public:
  struct Entry {
    std::string source;
    std::string target;
    double probability;
  };

  // 0 when the pair has no entry.
  double Probability(std::string_view source, std::string_view target) const;
  // Probability clamped from below by kProbabilityFloor.
  double FlooredProbability(std::string_view source,
                            std::string_view target) const;

  void Set(std::string_view source, std::string_view target,
           double probability);

  bool HasSource(std::string_view source) const;
  std::size_t SourceCount() const { return table_.size(); }
  std::size_t size() const;

  // Entries sorted by (source, target).
  std::vector<Entry> Entries() const;
  // Visits every target distribution, sources in sorted order.
  void ForEachSource(
      const std::function<void(const std::string &,
                               const std::map<std::string, double, std::less<>> &)>
          &fn) const;

  // TSV `source \t target \t probability`, sorted.
  void Write(std::ostream &out) const;
  static TranslationTable Read(std::istream &in);
  static TranslationTable ReadFile(const std::filesystem::path &path);

 private:
  std::map<std::string, std::map<std::string, double, std::less<>>,
           std::less<>>
      table_;
};

struct Ibm1Options {
  std::size_t iterations = 5;
  unsigned threads = 1;
};

struct Ibm1Result {
  TranslationTable table;
  // Corpus log-likelihood (nats) under the initial table and after each
  // iteration; iterations + 1 values.
  std::vector<double> log_likelihood;
};

// Throws DomainError for an empty corpus or zero iterations.
Ibm1Result TrainIbm1(const ParallelCorpus &corpus, const Ibm1Options &options);

// Alignment posteriors P(a_j = i | pair): result[j][0] is NULL,
// result[j][i + 1] is source position i. Unknown pairs use the floor.
std::vector<std::vector<double>> LinkPosteriors(const SentencePair &pair,
                                                const TranslationTable &table);

// Links each target word to its most probable source word. NULL takes part
// as position -1: it wins ties and its links are dropped. Among source
// positions the smallest index wins ties.
Alignment ViterbiAlign(const SentencePair &pair, const TranslationTable &table);

std::vector<Alignment> ViterbiAlignCorpus(const ParallelCorpus &corpus,
                                          const TranslationTable &table,
                                          unsigned threads = 1);

// Sum over target positions of ln t(y_j | x_a(j)) where a(j) is the leftmost
// source word linked to j, or NULL when j is unlinked. Probabilities below
// kProbabilityFloor are floored.
double WordAlignmentScore(const SentencePair &pair, const Alignment &alignment,
                          const TranslationTable &table);

}  // namespace distillens

#endif  // DISTILLENS_ALIGNER_H_
