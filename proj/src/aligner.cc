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

#include "distillens/aligner.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <utility>

#include "distillens/errors.h"
#include "distillens/parallel.h"

namespace distillens {

// --- TranslationTable --------------------------------------------------------

double TranslationTable::Probability(std::string_view source,
                                     std::string_view target) const {
  const auto row = table_.find(source);
  if (row == table_.end()) return 0.0;
  const auto cell = row->second.find(target);
  return cell == row->second.end() ? 0.0 : cell->second;
}

double TranslationTable::FlooredProbability(std::string_view source,
                                            std::string_view target) const {
  return std::max(Probability(source, target), kProbabilityFloor);
}

void TranslationTable::Set(std::string_view source, std::string_view target,
                           double probability) {
  auto row = table_.find(source);
  if (row == table_.end()) {
    row = table_.emplace(std::string(source),
                         std::map<std::string, double, std::less<>>())
              .first;
  }
  row->second.insert_or_assign(std::string(target), probability);
}

bool TranslationTable::HasSource(std::string_view source) const {
  return table_.find(source) != table_.end();
}

std::size_t TranslationTable::size() const {
  std::size_t n = 0;
  for (const auto &[source, row] : table_) n += row.size();
  return n;
}

std::vector<TranslationTable::Entry> TranslationTable::Entries() const {
  std::vector<Entry> entries;
  entries.reserve(size());
  for (const auto &[source, row] : table_) {
    for (const auto &[target, p] : row) entries.push_back({source, target, p});
  }
  return entries;
}

void TranslationTable::ForEachSource(
    const std::function<void(const std::string &,
                             const std::map<std::string, double, std::less<>> &)>
        &fn) const {
  for (const auto &[source, row] : table_) fn(source, row);
}

void TranslationTable::Write(std::ostream &out) const {
  for (const auto &[source, row] : table_) {
    for (const auto &[target, p] : row) {
      out << source << '\t' << target << '\t' << FormatDouble(p) << '\n';
    }
  }
}

TranslationTable TranslationTable::Read(std::istream &in) {
  TranslationTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected 'source<TAB>target<TAB>probability'",
                       line_no);
    }
    const std::string value = line.substr(t2 + 1);
    double p = 0.0;
    std::size_t used = 0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !(p >= 0.0 && p <= 1.0)) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": invalid probability '" + value + "'",
                       line_no);
    }
    table.Set(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), p);
  }
  return table;
}

TranslationTable TranslationTable::ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  try {
    return Read(in);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

// --- IBM Model 1 training ----------------------------------------------------

namespace {

using Id = std::uint32_t;

Id Intern(std::unordered_map<std::string, Id> &vocab,
          std::vector<std::string> &names, const std::string &word) {
  const auto [it, inserted] = vocab.emplace(word, static_cast<Id>(names.size()));
  if (inserted) names.push_back(word);
  return it->second;
}

// Dense parameter layout: every co-occurring (x, y) pair gets one slot, and
// each sentence stores the slot of every (j, i) cell so the EM passes never
// touch a hash table.
struct Model1Problem {
  std::vector<std::string> source_names;  // id 0 is NULL
  std::vector<std::string> target_names;
  std::vector<Id> param_source;           // slot -> source id
  std::vector<Id> param_target;           // slot -> target id
  // Per sentence: offset into `cells`, source length + 1 (with NULL), target
  // length. Cells are laid out [j][i] with i = 0 for NULL.
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> width;
  std::vector<std::uint32_t> height;
  std::vector<std::uint32_t> cells;
};

Model1Problem BuildProblem(const ParallelCorpus &corpus) {
  Model1Problem p;
  std::unordered_map<std::string, Id> source_vocab;
  std::unordered_map<std::string, Id> target_vocab;
  Intern(source_vocab, p.source_names, std::string(kNullToken));
  std::unordered_map<std::uint64_t, std::uint32_t> slot_of;

  std::vector<Id> src;
  for (const SentencePair &pair : corpus.pairs) {
    src.assign(1, 0);
    for (const std::string &w : pair.source) {
      src.push_back(Intern(source_vocab, p.source_names, w));
    }
    p.offset.push_back(p.cells.size());
    p.width.push_back(static_cast<std::uint32_t>(src.size()));
    p.height.push_back(static_cast<std::uint32_t>(pair.target.size()));
    for (const std::string &w : pair.target) {
      const Id y = Intern(target_vocab, p.target_names, w);
      for (Id x : src) {
        const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
        const auto [it, inserted] = slot_of.emplace(
            key, static_cast<std::uint32_t>(p.param_source.size()));
        if (inserted) {
          p.param_source.push_back(x);
          p.param_target.push_back(y);
        }
        p.cells.push_back(it->second);
      }
    }
  }
  return p;
}

// Computes per-cell posteriors into `posterior` (same layout as `cells`) and
// returns the per-sentence log-likelihoods.
std::vector<double> EStep(const Model1Problem &p,
                          const std::vector<double> &prob,
                          std::vector<double> &posterior, unsigned threads) {
  const std::size_t n = p.offset.size();
  std::vector<double> sentence_ll(n, 0.0);
  ParallelFor(n, threads, [&](std::size_t s) {
    const std::size_t w = p.width[s];
    const double log_width = std::log(static_cast<double>(w));
    double ll = 0.0;
    for (std::size_t j = 0; j < p.height[s]; ++j) {
      const std::size_t base = p.offset[s] + j * w;
      double z = 0.0;
      for (std::size_t i = 0; i < w; ++i) z += prob[p.cells[base + i]];
      for (std::size_t i = 0; i < w; ++i) {
        posterior[base + i] = prob[p.cells[base + i]] / z;
      }
      ll += std::log(z) - log_width;
    }
    sentence_ll[s] = ll;
  });
  return sentence_ll;
}

double Sum(const std::vector<double> &values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace

Ibm1Result TrainIbm1(const ParallelCorpus &corpus, const Ibm1Options &options) {
  if (corpus.empty()) throw DomainError("cannot train IBM Model 1 on an empty corpus");
  if (options.iterations < 1) {
    throw DomainError("IBM Model 1 needs at least one EM iteration");
  }
  const Model1Problem p = BuildProblem(corpus);
  const std::size_t num_params = p.param_source.size();
  const std::size_t num_sources = p.source_names.size();

  // Uniform over co-occurring targets.
  std::vector<double> per_source(num_sources, 0.0);
  for (Id x : p.param_source) per_source[x] += 1.0;
  std::vector<double> prob(num_params);
  for (std::size_t k = 0; k < num_params; ++k) {
    prob[k] = 1.0 / per_source[p.param_source[k]];
  }

  Ibm1Result result;
  std::vector<double> posterior(p.cells.size());
  std::vector<double> counts(num_params);
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    result.log_likelihood.push_back(
        Sum(EStep(p, prob, posterior, options.threads)));

    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t c = 0; c < p.cells.size(); ++c) {
      counts[p.cells[c]] += posterior[c];
    }
    std::fill(per_source.begin(), per_source.end(), 0.0);
    for (std::size_t k = 0; k < num_params; ++k) {
      per_source[p.param_source[k]] += counts[k];
    }
    for (std::size_t k = 0; k < num_params; ++k) {
      prob[k] = counts[k] / per_source[p.param_source[k]];
    }
  }
  result.log_likelihood.push_back(
      Sum(EStep(p, prob, posterior, options.threads)));

  for (std::size_t k = 0; k < num_params; ++k) {
    result.table.Set(p.source_names[p.param_source[k]],
                     p.target_names[p.param_target[k]], prob[k]);
  }
  return result;
}

std::vector<std::vector<double>> LinkPosteriors(const SentencePair &pair,
                                                const TranslationTable &table) {
  std::vector<std::vector<double>> posteriors;
  posteriors.reserve(pair.target.size());
  for (const std::string &y : pair.target) {
    std::vector<double> row;
    row.reserve(pair.source.size() + 1);
    row.push_back(table.FlooredProbability(kNullToken, y));
    for (const std::string &x : pair.source) {
      row.push_back(table.FlooredProbability(x, y));
    }
    double z = 0.0;
    for (double v : row) z += v;
    for (double &v : row) v /= z;
    posteriors.push_back(std::move(row));
  }
  return posteriors;
}

// --- Alignment and scoring ---------------------------------------------------

Alignment ViterbiAlign(const SentencePair &pair, const TranslationTable &table) {
  std::vector<Link> links;
  for (std::size_t j = 0; j < pair.target.size(); ++j) {
    const std::string &y = pair.target[j];
    double best = table.FlooredProbability(kNullToken, y);
    std::ptrdiff_t best_i = -1;
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
      const double p = table.FlooredProbability(pair.source[i], y);
      if (p > best) {
        best = p;
        best_i = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (best_i >= 0) {
      links.push_back({static_cast<std::uint32_t>(best_i),
                       static_cast<std::uint32_t>(j)});
    }
  }
  return Alignment(std::move(links));
}

std::vector<Alignment> ViterbiAlignCorpus(const ParallelCorpus &corpus,
                                          const TranslationTable &table,
                                          unsigned threads) {
  std::vector<Alignment> alignments(corpus.size());
  ParallelFor(corpus.size(), threads, [&](std::size_t s) {
    alignments[s] = ViterbiAlign(corpus[s], table);
  });
  return alignments;
}

double WordAlignmentScore(const SentencePair &pair, const Alignment &alignment,
                          const TranslationTable &table) {
  alignment.Validate(pair);
  constexpr std::uint32_t kUnlinked = UINT32_MAX;
  std::vector<std::uint32_t> leftmost(pair.target.size(), kUnlinked);
  for (const Link &l : alignment.links()) {
    leftmost[l.target] = std::min(leftmost[l.target], l.source);
  }
  double score = 0.0;
  for (std::size_t j = 0; j < pair.target.size(); ++j) {
    const std::string_view x = leftmost[j] == kUnlinked
                                   ? kNullToken
                                   : std::string_view(pair.source[leftmost[j]]);
    score += std::log(table.FlooredProbability(x, pair.target[j]));
  }
  return score;
}

}  // namespace distillens
