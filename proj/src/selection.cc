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

#include "distillens/selection.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "distillens/complexity.h"
#include "distillens/errors.h"
#include "distillens/parallel.h"

namespace distillens {
namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts CountNgrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + i,
                                       tokens.begin() + i + n);
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

ComplexityKind ParseComplexityKind(std::string_view name) {
  if (name == "frs") return ComplexityKind::kFrs;
  if (name == "walign" || name == "word_align") return ComplexityKind::kWordAlign;
  if (name == "nmt") return ComplexityKind::kNmt;
  throw DomainError("unknown complexity function '" + std::string(name) +
                    "' (expected frs, walign or nmt)");
}

std::string_view ComplexityKindName(ComplexityKind kind) {
  switch (kind) {
    case ComplexityKind::kFrs:
      return "frs";
    case ComplexityKind::kWordAlign:
      return "walign";
    case ComplexityKind::kNmt:
      return "nmt";
  }
  return "?";
}

void SelectionConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("lambda must lie in [0,1]");
  }
  if (max_ngram < 1) throw DomainError("max n-gram order must be >= 1");
}

double SmoothedSentenceBleu(std::span<const std::string> hypothesis,
                            std::span<const std::string> reference,
                            std::size_t max_ngram) {
  if (hypothesis.empty() || reference.empty() || max_ngram == 0) return 0.0;
  double log_precision = 0.0;
  for (std::size_t n = 1; n <= max_ngram; ++n) {
    const NgramCounts hyp = CountNgrams(hypothesis, n);
    const NgramCounts ref = CountNgrams(reference, n);
    double matched = 0.0;
    double total = 0.0;
    for (const auto &[gram, count] : hyp) {
      total += static_cast<double>(count);
      const auto it = ref.find(gram);
      if (it != ref.end()) {
        matched += static_cast<double>(std::min(count, it->second));
      }
    }
    if (n >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0) return 0.0;
    log_precision += std::log(matched / total);
  }
  const double ratio = static_cast<double>(reference.size()) /
                       static_cast<double>(hypothesis.size());
  const double brevity = std::min(1.0, std::exp(1.0 - ratio));
  return brevity * std::exp(log_precision / static_cast<double>(max_ngram));
}

std::vector<double> MinMaxNormalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - *lo) / range;
  }
  return out;
}

std::vector<ScoredHypothesis> ScoreHypotheses(
    const KBestList &list, std::span<const std::string> reference,
    std::span<const std::string> source, const SelectionConfig &config,
    const SelectionResources &resources) {
  config.Validate();
  if (config.complexity != ComplexityKind::kNmt && resources.table == nullptr) {
    throw DomainError("complexity '" +
                      std::string(ComplexityKindName(config.complexity)) +
                      "' needs a translation table");
  }

  const std::size_t k = list.entries.size();
  std::vector<double> sims(k);
  std::vector<double> cxty(k);
  for (std::size_t r = 0; r < k; ++r) {
    const KBestEntry &e = list.entries[r];
    sims[r] = SmoothedSentenceBleu(e.hypothesis, reference, config.max_ngram);
    switch (config.complexity) {
      case ComplexityKind::kNmt:
        cxty[r] = e.nmt_logprob;
        break;
      case ComplexityKind::kFrs:
      case ComplexityKind::kWordAlign: {
        SentencePair pair{Tokens(source.begin(), source.end()), e.hypothesis};
        const Alignment alignment = ViterbiAlign(pair, *resources.table);
        cxty[r] = config.complexity == ComplexityKind::kFrs
                      ? SentenceFrs(alignment, pair.target.size())
                      : WordAlignmentScore(pair, alignment, *resources.table);
        break;
      }
    }
  }

  const std::vector<double> sim_norm = MinMaxNormalize(sims);
  const std::vector<double> cxty_norm = MinMaxNormalize(cxty);
  std::vector<ScoredHypothesis> scored(k);
  for (std::size_t r = 0; r < k; ++r) {
    ScoredHypothesis &h = scored[r];
    h.rank = r;
    h.entry = list.entries[r];
    h.sim = sims[r];
    h.sim_norm = sim_norm[r];
    h.cxty_raw = cxty[r];
    h.cxty_norm = cxty_norm[r];
    h.total = config.lambda * h.sim_norm + (1.0 - config.lambda) * h.cxty_norm;
  }
  return scored;
}

std::size_t ArgmaxTotal(std::span<const ScoredHypothesis> scored) {
  if (scored.empty()) throw DomainError("cannot select from an empty k-best list");
  std::size_t best = 0;
  for (std::size_t r = 1; r < scored.size(); ++r) {
    if (scored[r].total > scored[best].total) best = r;
  }
  return best;
}

KBestEntry SelectReference(const KBestList &list,
                           std::span<const std::string> reference,
                           std::span<const std::string> source,
                           const SelectionConfig &config,
                           const SelectionResources &resources) {
  if (list.entries.empty()) {
    throw DomainError("cannot select from an empty k-best list");
  }
  const std::vector<ScoredHypothesis> scored =
      ScoreHypotheses(list, reference, source, config, resources);
  return scored[ArgmaxTotal(scored)].entry;
}

CorpusSelection SelectCorpus(const KBestMap &kbest, const ParallelCorpus &corpus,
                             const SelectionConfig &config,
                             const SelectionResources &resources,
                             unsigned threads) {
  config.Validate();
  std::vector<const KBestList *> lists(corpus.size(), nullptr);
  for (const auto &[id, list] : kbest) {
    if (id >= corpus.size()) {
      throw DomainError("k-best sentence id " + std::to_string(id) +
                        " exceeds corpus size " + std::to_string(corpus.size()));
    }
    lists[id] = &list;
  }
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    if (lists[s] == nullptr || lists[s]->entries.empty()) {
      throw DomainError("no k-best hypotheses for sentence id " +
                        std::to_string(s));
    }
  }

  CorpusSelection result;
  result.selected.resize(corpus.size());
  result.scored.resize(corpus.size());
  ParallelFor(corpus.size(), threads, [&](std::size_t s) {
    result.scored[s] = ScoreHypotheses(*lists[s], corpus[s].target,
                                       corpus[s].source, config, resources);
    result.selected[s] = result.scored[s][ArgmaxTotal(result.scored[s])].entry;
  });
  return result;
}

}  // namespace distillens
