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

// Seeded generators for toy parallel corpora with known alignments.

#ifndef DISTILLENS_TOOLS_SYNTHETIC_H_
#define DISTILLENS_TOOLS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "distillens/corpus_io.h"

namespace distillens::synthetic {

struct AlignedCorpus {
  ParallelCorpus corpus;
  std::vector<Alignment> alignments;
};

struct LexiconCorpus {
  AlignedCorpus data;
  std::map<std::string, std::string> lexicon;  // source word -> target word
};

// Word-for-word translations through a one-to-one lexicon of `lexicon_size`
// entries. Sentences have 3..8 distinct source words; with `permute_target`
// the target order is shuffled (the gold alignment follows it).
LexiconCorpus MakeBijectiveCorpus(std::size_t pairs, std::size_t lexicon_size,
                                  std::uint32_t seed,
                                  bool permute_target = false);

struct DirectionalCorpora {
  AlignedCorpus real;
  AlignedCorpus distilled;
};

// A "real" corpus whose targets draw each word from several synonyms and
// reorder phrases, and a "distilled" counterpart over the same sources that
// always uses the first synonym in monotone order.
DirectionalCorpora MakeDirectionalCorpora(std::size_t pairs,
                                          std::uint32_t seed);

}  // namespace distillens::synthetic

#endif  // DISTILLENS_TOOLS_SYNTHETIC_H_
