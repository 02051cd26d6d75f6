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

#include "synthetic.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>

namespace distillens::synthetic {
namespace {

std::string Word(const char *prefix, std::size_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 2) digits.insert(0, "0");
  return prefix + digits;
}

// Integer in [lo, hi] without relying on implementation-defined
// distributions, so the corpora are identical across standard libraries.
std::size_t Uniform(std::mt19937 &rng, std::size_t lo, std::size_t hi) {
  return lo + rng() % (hi - lo + 1);
}

void Shuffle(std::vector<std::uint32_t> &v, std::mt19937 &rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[Uniform(rng, 0, i - 1)]);
  }
}

}  // namespace

LexiconCorpus MakeBijectiveCorpus(std::size_t pairs, std::size_t lexicon_size,
                                  std::uint32_t seed, bool permute_target) {
  std::mt19937 rng(seed);
  LexiconCorpus out;
  for (std::size_t w = 0; w < lexicon_size; ++w) {
    out.lexicon[Word("src", w)] = Word("tgt", w);
  }
  for (std::size_t s = 0; s < pairs; ++s) {
    const std::size_t len =
        std::min<std::size_t>(Uniform(rng, 3, 8), lexicon_size);
    // Distinct words, so every gold link is recoverable from the lexicon.
    std::vector<std::uint32_t> words(lexicon_size);
    std::iota(words.begin(), words.end(), 0u);
    Shuffle(words, rng);
    SentencePair pair;
    for (std::size_t i = 0; i < len; ++i) {
      pair.source.push_back(Word("src", words[i]));
    }
    // order[j] = source position translated at target position j.
    std::vector<std::uint32_t> order(len);
    std::iota(order.begin(), order.end(), 0u);
    if (permute_target) Shuffle(order, rng);
    std::vector<Link> links;
    for (std::uint32_t j = 0; j < len; ++j) {
      pair.target.push_back(out.lexicon.at(pair.source[order[j]]));
      links.push_back({order[j], j});
    }
    out.data.corpus.pairs.push_back(std::move(pair));
    out.data.alignments.emplace_back(std::move(links));
  }
  return out;
}

DirectionalCorpora MakeDirectionalCorpora(std::size_t pairs,
                                          std::uint32_t seed) {
  constexpr std::size_t kSourceTypes = 40;
  constexpr std::size_t kSynonyms = 3;
  std::mt19937 rng(seed);
  DirectionalCorpora out;
  for (std::size_t s = 0; s < pairs; ++s) {
    const std::size_t len = Uniform(rng, 4, 10);
    Tokens source;
    std::vector<std::size_t> types;
    for (std::size_t i = 0; i < len; ++i) {
      types.push_back(Uniform(rng, 0, kSourceTypes - 1));
      source.push_back(Word("de", types.back()));
    }

    // Distilled: canonical synonym, monotone.
    {
      SentencePair pair{source, {}};
      std::vector<Link> links;
      for (std::uint32_t i = 0; i < len; ++i) {
        pair.target.push_back(Word("en", types[i]) + "a");
        links.push_back({i, i});
      }
      out.distilled.corpus.pairs.push_back(std::move(pair));
      out.distilled.alignments.emplace_back(std::move(links));
    }

    // Real: random synonyms; the final word moves to the front (verb-final
    // to verb-second style) and a random inner span is reversed.
    {
      std::vector<std::uint32_t> order(len);
      std::iota(order.begin(), order.end(), 0u);
      std::rotate(order.begin(), order.end() - 1, order.end());
      const std::size_t a = Uniform(rng, 1, len - 2);
      const std::size_t b = Uniform(rng, a + 1, len - 1);
      std::reverse(order.begin() + a, order.begin() + b + 1);

      SentencePair pair{source, {}};
      std::vector<Link> links;
      for (std::uint32_t j = 0; j < len; ++j) {
        const char synonym =
            static_cast<char>('a' + Uniform(rng, 0, kSynonyms - 1));
        pair.target.push_back(Word("en", types[order[j]]) + synonym);
        links.push_back({order[j], j});
      }
      out.real.corpus.pairs.push_back(std::move(pair));
      out.real.alignments.emplace_back(std::move(links));
    }
  }
  return out;
}

}  // namespace distillens::synthetic
