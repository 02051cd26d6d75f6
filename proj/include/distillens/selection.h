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

// Picks one distilled reference per source sentence from a teacher's k-best
// list. Each hypothesis h is scored as
//
//   total(h) = lambda * sim(h) + (1 - lambda) * cxty(h)
//
// where sim is smoothed sentence BLEU against the original reference and
// cxty is one of: the hypothesis FRS under a Viterbi alignment, its word
// alignment score, or the teacher log-probability. Both components are
// min-max normalized within the list before mixing; a constant component
// maps to 0.5.

#ifndef DISTILLENS_SELECTION_H_
#define DISTILLENS_SELECTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distillens/aligner.h"
#include "distillens/corpus_io.h"

namespace distillens {

enum class ComplexityKind { kFrs, kWordAlign, kNmt };

// Accepts "frs", "walign" (or "word_align") and "nmt".
ComplexityKind ParseComplexityKind(std::string_view name);
std::string_view ComplexityKindName(ComplexityKind kind);

struct SelectionConfig {
  double lambda = 0.5;
  ComplexityKind complexity = ComplexityKind::kNmt;
  std::size_t max_ngram = 4;

  // Throws DomainError when lambda is outside [0,1] or max_ngram is 0.
  void Validate() const;
};

// What the complexity functions may need besides the k-best list itself.
struct SelectionResources {
  const TranslationTable *table = nullptr;
};

struct ScoredHypothesis {
  std::size_t rank = 0;
  KBestEntry entry;
  double sim = 0.0;
  double sim_norm = 0.0;
  double cxty_raw = 0.0;
  double cxty_norm = 0.0;
  double total = 0.0;
};

// Sentence BLEU with add-one smoothing on n-gram orders >= 2 and brevity
// penalty min(1, exp(1 - |ref| / |hyp|)). An empty hypothesis scores 0.
double SmoothedSentenceBleu(std::span<const std::string> hypothesis,
                            std::span<const std::string> reference,
                            std::size_t max_ngram = 4);

// Maps values to [0,1] by (v - min) / (max - min); all 0.5 if constant.
std::vector<double> MinMaxNormalize(std::span<const double> values);

// Scores every entry of `list` in rank order. Throws DomainError if the
// chosen complexity needs a translation table that was not supplied.
std::vector<ScoredHypothesis> ScoreHypotheses(
    const KBestList &list, std::span<const std::string> reference,
    std::span<const std::string> source, const SelectionConfig &config,
    const SelectionResources &resources);

// Index of the highest total; ties go to the lowest rank.
std::size_t ArgmaxTotal(std::span<const ScoredHypothesis> scored);

// Best-scoring entry. Throws DomainError for an empty list.
KBestEntry SelectReference(const KBestList &list,
                           std::span<const std::string> reference,
                           std::span<const std::string> source,
                           const SelectionConfig &config,
                           const SelectionResources &resources);

struct CorpusSelection {
  // One per sentence, in sentence order.
  std::vector<KBestEntry> selected;
  // scored[s] holds every hypothesis of sentence s.
  std::vector<std::vector<ScoredHypothesis>> scored;
};

// Runs selection for every sentence of `corpus` (source side = source,
// target side = original reference). The k-best ids must be exactly
// 0 .. corpus.size() - 1.
CorpusSelection SelectCorpus(const KBestMap &kbest, const ParallelCorpus &corpus,
                             const SelectionConfig &config,
                             const SelectionResources &resources,
                             unsigned threads = 1);

}  // namespace distillens

#endif  // DISTILLENS_SELECTION_H_
