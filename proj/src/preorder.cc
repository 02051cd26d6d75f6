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

#include "distillens/preorder.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>

#include "distillens/errors.h"

namespace distillens {

PreorderResult MonotonePreorder(std::span<const std::string> source,
                                const Alignment &alignment) {
  const std::size_t n = source.size();
  constexpr std::int64_t kUnaligned = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> key(n, kUnaligned);
  for (const Link &l : alignment.links()) {
    if (l.source >= n) {
      throw DomainError("alignment link source " + std::to_string(l.source) +
                        " outside a " + std::to_string(n) + "-token sentence");
    }
    key[l.source] = std::min<std::int64_t>(key[l.source], l.target);
  }

  // Blocks: an aligned token followed by the unaligned run after it. Leading
  // unaligned tokens form a block keyed -1.
  struct Block {
    std::int64_t key;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (key[i] != kUnaligned) {
      blocks.push_back({key[i], i, i + 1});
    } else if (blocks.empty()) {
      blocks.push_back({-1, i, i + 1});
    } else {
      blocks.back().end = i + 1;
    }
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block &a, const Block &b) { return a.key < b.key; });

  PreorderResult result;
  result.source.reserve(n);
  result.permutation.reserve(n);
  std::vector<std::uint32_t> new_position(n);
  for (const Block &b : blocks) {
    for (std::size_t i = b.begin; i < b.end; ++i) {
      new_position[i] = static_cast<std::uint32_t>(result.source.size());
      result.source.push_back(source[i]);
      result.permutation.push_back(i);
    }
  }
  std::vector<Link> links;
  links.reserve(alignment.size());
  for (const Link &l : alignment.links()) {
    links.push_back({new_position[l.source], l.target});
  }
  result.alignment = Alignment(std::move(links));
  return result;
}

PreorderedCorpus PreorderCorpus(const ParallelCorpus &corpus,
                                std::span<const Alignment> alignments) {
  ValidateAlignments(corpus, alignments);
  PreorderedCorpus out;
  out.corpus.pairs.reserve(corpus.size());
  out.alignments.reserve(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    PreorderResult r = MonotonePreorder(corpus[s].source, alignments[s]);
    out.corpus.pairs.push_back({std::move(r.source), corpus[s].target});
    out.alignments.push_back(std::move(r.alignment));
  }
  return out;
}

}  // namespace distillens
