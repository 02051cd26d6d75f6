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

#ifndef DISTILLENS_PREORDER_H_
#define DISTILLENS_PREORDER_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "distillens/corpus_io.h"

namespace distillens {

struct PreorderResult {
  Tokens source;
  Alignment alignment;
  // permutation[k] is the original position of the token now at k.
  std::vector<std::size_t> permutation;
};

// Reorders source tokens so they follow the target order.
//
// An aligned source token is keyed by the smallest target index it links to
// and aligned tokens are stably sorted by that key. Each run of unaligned
// tokens stays glued behind the nearest aligned token to its left, in its
// original order; a run at the start of the sentence stays first. Links are
// re-indexed to the new source positions.
PreorderResult MonotonePreorder(std::span<const std::string> source,
                                const Alignment &alignment);

struct PreorderedCorpus {
  ParallelCorpus corpus;
  std::vector<Alignment> alignments;
};

// Applies MonotonePreorder to every pair; targets are untouched.
PreorderedCorpus PreorderCorpus(const ParallelCorpus &corpus,
                                std::span<const Alignment> alignments);

}  // namespace distillens

#endif  // DISTILLENS_PREORDER_H_
