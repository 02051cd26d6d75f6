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
#include <random>

#include "distillens/complexity.h"
#include "doctest.h"
#include "synthetic.h"

namespace distillens {
namespace {

Tokens T(const char *s) { return SplitTokens(s); }

TEST_CASE("MonotonePreorder hand cases") {
  const PreorderResult id = MonotonePreorder(T("a b c"), ParsePharaoh("0-0 1-1 2-2"));
  CHECK(id.source == T("a b c"));
  CHECK(id.alignment == ParsePharaoh("0-0 1-1 2-2"));
  CHECK(id.permutation == std::vector<std::size_t>{0, 1, 2});

  const PreorderResult rev = MonotonePreorder(T("a b c"), ParsePharaoh("0-2 1-1 2-0"));
  CHECK(rev.source == T("c b a"));
  CHECK(rev.alignment == ParsePharaoh("0-0 1-1 2-2"));
  CHECK(rev.permutation == std::vector<std::size_t>{2, 1, 0});

  const PreorderResult glued = MonotonePreorder(T("a u b"), ParsePharaoh("0-1 2-0"));
  CHECK(glued.source == T("b a u"));
  CHECK(glued.alignment == ParsePharaoh("0-0 1-1"));

  // A leading unaligned run stays first.
  const PreorderResult lead = MonotonePreorder(T("u v a b"), ParsePharaoh("2-1 3-0"));
  CHECK(lead.source == T("u v b a"));

  // Multi-linked tokens use their smallest target index.
  const PreorderResult multi = MonotonePreorder(T("a b"), ParsePharaoh("0-2 0-3 1-1 1-0"));
  CHECK(multi.source == T("b a"));
  CHECK(multi.alignment == ParsePharaoh("0-0 0-1 1-2 1-3"));

  CHECK(MonotonePreorder({}, Alignment()).source.empty());
}

struct RandomSentence {
  Tokens source;
  Alignment alignment;
};

RandomSentence MakeRandom(std::mt19937 &rng) {
  RandomSentence s;
  const std::size_t src_len = 1 + rng() % 9, tgt_len = 1 + rng() % 9;
  for (std::size_t i = 0; i < src_len; ++i) s.source.push_back("w" + std::to_string(rng() % 5));
  std::vector<Link> links;
  for (std::size_t i = 0; i < src_len; ++i) {
    for (std::size_t j = 0; j < tgt_len; ++j) {
      if (rng() % 4 == 0) {
        links.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
  }
  s.alignment = Alignment(std::move(links));
  return s;
}

TEST_CASE("MonotonePreorder is idempotent and preserves tokens and links") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomSentence s = MakeRandom(rng);
    const PreorderResult once = MonotonePreorder(s.source, s.alignment);
    const PreorderResult twice = MonotonePreorder(once.source, once.alignment);
    CHECK(twice.source == once.source);
    CHECK(twice.alignment == once.alignment);

    Tokens a = s.source, b = once.source;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);

    // Each new link is an old link moved through the permutation.
    REQUIRE(once.permutation.size() == s.source.size());
    CHECK(once.alignment.size() == s.alignment.size());
    for (const Link &l : once.alignment.links()) {
      CHECK(s.source[once.permutation[l.source]] == once.source[l.source]);
      CHECK(s.alignment.Contains(
          {static_cast<std::uint32_t>(once.permutation[l.source]), l.target}));
    }
  }
}

TEST_CASE("Fully aligned one-to-one sentences become monotone") {
  const auto data = synthetic::MakeBijectiveCorpus(300, 20, 5, true);
  const PreorderedCorpus p = PreorderCorpus(data.data.corpus, data.data.alignments);
  REQUIRE(p.corpus.size() == data.data.corpus.size());
  for (std::size_t s = 0; s < p.corpus.size(); ++s) {
    CHECK(p.corpus[s].target == data.data.corpus[s].target);
    CHECK(SentenceFrs(p.alignments[s], p.corpus[s].target.size()) == 1.0);
  }
  CHECK(CorpusFrs(p.corpus, p.alignments) == 1.0);
}

}  // namespace
}  // namespace distillens
