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

#include "distillens/complexity.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "distillens/errors.h"

namespace distillens {

void ConditionalTable::Add(std::string_view source, std::string_view target,
                           double count) {
  auto row = rows_.find(source);
  if (row == rows_.end()) row = rows_.emplace(std::string(source), Row()).first;
  auto cell = row->second.find(target);
  if (cell == row->second.end()) {
    row->second.emplace(std::string(target), count);
  } else {
    cell->second += count;
  }
  auto total = totals_.find(source);
  if (total == totals_.end()) {
    totals_.emplace(std::string(source), count);
  } else {
    total->second += count;
  }
}

double ConditionalTable::Count(std::string_view source,
                               std::string_view target) const {
  const Row *row = Find(source);
  if (row == nullptr) return 0.0;
  const auto cell = row->find(target);
  return cell == row->end() ? 0.0 : cell->second;
}

double ConditionalTable::Total(std::string_view source) const {
  const auto it = totals_.find(source);
  return it == totals_.end() ? 0.0 : it->second;
}

double ConditionalTable::Probability(std::string_view source,
                                     std::string_view target) const {
  const double total = Total(source);
  return total > 0.0 ? Count(source, target) / total : 0.0;
}

const ConditionalTable::Row *ConditionalTable::Find(
    std::string_view source) const {
  const auto it = rows_.find(source);
  return it == rows_.end() ? nullptr : &it->second;
}

double SentenceFrs(const Alignment &alignment, std::size_t target_length) {
  constexpr std::uint32_t kUnlinked = UINT32_MAX;
  std::vector<std::uint32_t> leftmost(target_length, kUnlinked);
  for (const Link &l : alignment.links()) {
    if (l.target >= target_length) {
      throw DomainError("alignment link targets position " +
                        std::to_string(l.target) + " of a " +
                        std::to_string(target_length) + "-token sentence");
    }
    leftmost[l.target] = std::min(leftmost[l.target], l.source);
  }

  std::size_t aligned = 0;
  std::size_t chunks = 0;
  std::uint32_t prev = 0;
  for (std::uint32_t a : leftmost) {
    if (a == kUnlinked) continue;
    if (aligned == 0 || a != prev + 1) ++chunks;
    prev = a;
    ++aligned;
  }
  if (aligned <= 1) return 1.0;
  return 1.0 - static_cast<double>(chunks - 1) /
                   static_cast<double>(aligned - 1);
}

double CorpusFrs(const ParallelCorpus &corpus,
                 std::span<const Alignment> alignments) {
  if (alignments.size() != corpus.size()) {
    throw DomainError("corpus has " + std::to_string(corpus.size()) +
                      " sentence pairs but " +
                      std::to_string(alignments.size()) + " alignments");
  }
  if (corpus.empty()) throw DomainError("FRS of an empty corpus is undefined");
  double sum = 0.0;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    sum += SentenceFrs(alignments[s], corpus[s].target.size());
  }
  return sum / static_cast<double>(corpus.size());
}

ConditionalTable ConditionalDistribution(
    const ParallelCorpus &corpus, std::span<const Alignment> alignments) {
  ValidateAlignments(corpus, alignments);
  ConditionalTable table;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (const Link &l : alignments[s].links()) {
      table.Add(corpus[s].source[l.source], corpus[s].target[l.target]);
    }
  }
  return table;
}

double LexicalDiversity(const ConditionalTable &table) {
  if (table.empty()) {
    throw DomainError("lexical diversity needs at least one aligned source word");
  }
  double sum = 0.0;
  for (const auto &[source, row] : table.rows()) {
    const double total = table.Total(source);
    double entropy = 0.0;
    for (const auto &[target, count] : row) {
      if (count <= 0.0) continue;
      const double p = count / total;
      entropy -= p * std::log(p);
    }
    sum += entropy;
  }
  return sum / static_cast<double>(table.SourceCount());
}

double Faithfulness(const ConditionalTable &real_table,
                    const ConditionalTable &distilled_table, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("faithfulness smoothing alpha must be > 0");
  if (real_table.empty()) {
    throw DomainError("faithfulness needs a non-empty reference table");
  }
  double sum = 0.0;
  for (const auto &[source, real_row] : real_table.rows()) {
    const ConditionalTable::Row *distilled_row = distilled_table.Find(source);
    std::set<std::string_view> support;
    for (const auto &[y, c] : real_row) support.insert(y);
    if (distilled_row != nullptr) {
      for (const auto &[y, c] : *distilled_row) support.insert(y);
    }
    const double u = static_cast<double>(support.size());
    const double real_total = real_table.Total(source);
    const double distilled_total = distilled_table.Total(source);

    double kl = 0.0;
    for (const auto &[y, count] : real_row) {
      if (count <= 0.0) continue;
      const double p = count / real_total;
      double q;
      if (distilled_row == nullptr || distilled_total <= 0.0) {
        q = 1.0 / u;
      } else {
        q = (distilled_table.Count(source, y) / distilled_total + alpha) /
            (1.0 + alpha * u);
      }
      kl += p * std::log(p / q);
    }
    // Rounding can leave a self-divergence a hair below zero.
    sum += std::max(kl, 0.0);
  }
  return sum / static_cast<double>(real_table.SourceCount());
}

ComplexityReport ComputeComplexity(const ParallelCorpus &corpus,
                                   std::span<const Alignment> alignments,
                                   const ConditionalTable *reference,
                                   double alpha) {
  ComplexityReport report;
  report.sentence_count = corpus.size();
  report.frs = CorpusFrs(corpus, alignments);
  const ConditionalTable table = ConditionalDistribution(corpus, alignments);
  report.lexical_diversity = LexicalDiversity(table);
  report.faithfulness =
      Faithfulness(reference != nullptr ? *reference : table, table, alpha);
  return report;
}

}  // namespace distillens
