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

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "distillens/errors.h"
#include "doctest.h"
#include "synthetic.h"

namespace distillens {
namespace {

ParallelCorpus Corpus(std::initializer_list<std::pair<const char *, const char *>> pairs) {
  ParallelCorpus c;
  for (const auto &[s, t] : pairs) c.pairs.push_back({SplitTokens(s), SplitTokens(t)});
  return c;
}

void CheckNormalized(const TranslationTable &table) {
  table.ForEachSource([](const std::string &source, const auto &row) {
    double sum = 0.0;
    for (const auto &[target, p] : row) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CAPTURE(source);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  });
}

TEST_CASE("One EM round on a single pair splits the posterior evenly") {
  const ParallelCorpus corpus = Corpus({{"a", "x"}});
  const Ibm1Result r = TrainIbm1(corpus, {.iterations = 1});
  // Uniform start over co-occurring targets: both sources only see x.
  const auto post = LinkPosteriors(corpus[0], r.table);
  REQUIRE(post.size() == 1);
  CHECK(post[0][0] == doctest::Approx(0.5));  // NULL
  CHECK(post[0][1] == doctest::Approx(0.5));  // a
  // Each source has a single target, so the M-step normalizes both to 1.
  CHECK(r.table.Probability("a", "x") == doctest::Approx(1.0));
  CHECK(r.table.Probability(kNullToken, "x") == doctest::Approx(1.0));
  CheckNormalized(r.table);
}

TEST_CASE("A disambiguating pair drives p(x|a) above 0.9") {
  ParallelCorpus corpus;
  for (int copy = 0; copy < 50; ++copy) {
    corpus.pairs.push_back({{"a", "b"}, {"x", "y"}});
    corpus.pairs.push_back({{"a"}, {"x"}});
  }
  const Ibm1Result r = TrainIbm1(corpus, {.iterations = 10});
  CHECK(r.table.Probability("a", "x") > 0.9);
  CHECK(r.table.Probability("b", "y") > r.table.Probability("b", "x"));
  CheckNormalized(r.table);
}

TEST_CASE("TrainIbm1 preconditions") {
  CHECK_THROWS_AS(TrainIbm1(Corpus({{"a", "x"}}), {.iterations = 0}),
                  DomainError);
  CHECK_THROWS_AS(TrainIbm1(ParallelCorpus{}, {.iterations = 3}), DomainError);
}

TEST_CASE("EM log-likelihood never decreases and tables stay normalized") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    ParallelCorpus corpus;
    const std::size_t n = 2 + rng() % 10;
    for (std::size_t s = 0; s < n; ++s) {
      SentencePair p;
      for (std::size_t i = 0; i < 1 + rng() % 5; ++i) {
        p.source.push_back("s" + std::to_string(rng() % 6));
      }
      for (std::size_t j = 0; j < 1 + rng() % 5; ++j) {
        p.target.push_back("t" + std::to_string(rng() % 6));
      }
      corpus.pairs.push_back(p);
    }
    const Ibm1Result r = TrainIbm1(corpus, {.iterations = 8});
    REQUIRE(r.log_likelihood.size() == 9);
    for (std::size_t i = 1; i < r.log_likelihood.size(); ++i) {
      CHECK(r.log_likelihood[i] >= r.log_likelihood[i - 1] - 1e-9);
    }
    CheckNormalized(r.table);
  }
}

TEST_CASE("Training is bit-identical across thread counts") {
  const auto data = synthetic::MakeBijectiveCorpus(300, 15, 99, true);
  const Ibm1Result one = TrainIbm1(data.data.corpus, {.iterations = 4, .threads = 1});
  const Ibm1Result many = TrainIbm1(data.data.corpus, {.iterations = 4, .threads = 8});
  std::ostringstream a, b;
  one.table.Write(a);
  many.table.Write(b);
  CHECK(a.str() == b.str());
  CHECK(one.log_likelihood == many.log_likelihood);
}

TEST_CASE("Bijective lexicon is recovered exactly") {
  const auto data = synthetic::MakeBijectiveCorpus(400, 20, 1234, true);
  const Ibm1Result r = TrainIbm1(data.data.corpus, {.iterations = 10});
  for (const auto &[x, y] : data.lexicon) CHECK(r.table.Probability(x, y) > 0.9);
  const auto aligned = ViterbiAlignCorpus(data.data.corpus, r.table, 4);
  CHECK(aligned == data.data.alignments);
}

TEST_CASE("ViterbiAlign") {
  TranslationTable t;
  t.Set("a", "x", 1.0);
  t.Set("b", "y", 1.0);
  CHECK(ViterbiAlign({{"a", "b"}, {"x", "y"}}, t) == Alignment({{0, 0}, {1, 1}}));

  SUBCASE("NULL-aligned words are dropped") {
    TranslationTable u;
    u.Set("a", "x", 0.3);
    u.Set(kNullToken, "x", 0.6);
    u.Set("a", "y", 0.7);
    u.Set(kNullToken, "y", 0.4);
    CHECK(ViterbiAlign({{"a"}, {"x", "y"}}, u) == Alignment({{0, 1}}));
  }
  SUBCASE("ties go to the smallest source index") {
    TranslationTable u;
    u.Set("a", "x", 0.4);
    u.Set("b", "x", 0.2);
    CHECK(ViterbiAlign({{"a", "b", "a"}, {"x"}}, u) == Alignment({{0, 0}}));
  }
  SUBCASE("unknown words fall to NULL") {
    CHECK(ViterbiAlign({{"a"}, {"zzz"}}, t).empty());
  }
}

TEST_CASE("WordAlignmentScore") {
  TranslationTable t;
  t.Set("der", "the", 0.5);
  t.Set("katze", "cat", 0.25);
  t.Set(kNullToken, "cat", 0.1);
  const SentencePair pair{{"der", "katze"}, {"the", "cat"}};

  CHECK(WordAlignmentScore(pair, ParsePharaoh("0-0 1-1"), t) ==
        doctest::Approx(std::log(0.5) + std::log(0.25)));
  CHECK(WordAlignmentScore(pair, ParsePharaoh("0-0 1-1"), t) ==
        doctest::Approx(-2.0794).epsilon(1e-4));
  // Unaligned "cat" scores against NULL: ln 0.1 = -2.3026.
  CHECK(WordAlignmentScore(pair, ParsePharaoh("0-0"), t) ==
        doctest::Approx(std::log(0.5) + std::log(0.1)));
  // Leftmost of several links is used.
  CHECK(WordAlignmentScore(pair, ParsePharaoh("0-0 0-1 1-1"), t) ==
        doctest::Approx(std::log(0.5) + std::log(kProbabilityFloor)));

  TranslationTable ones;
  ones.Set("der", "the", 1.0);
  ones.Set("katze", "cat", 1.0);
  CHECK(WordAlignmentScore(pair, ParsePharaoh("1-1 0-0"), ones) == 0.0);
  CHECK_THROWS_AS(WordAlignmentScore(pair, ParsePharaoh("2-0"), ones),
                  DomainError);
}

TEST_CASE("TranslationTable TSV round trip") {
  const auto data = synthetic::MakeBijectiveCorpus(50, 8, 5);
  const Ibm1Result r = TrainIbm1(data.data.corpus, {.iterations = 3});
  std::stringstream buf;
  r.table.Write(buf);
  const TranslationTable back = TranslationTable::Read(buf);
  REQUIRE(back.size() == r.table.size());
  for (const auto &e : r.table.Entries()) {
    CHECK(back.Probability(e.source, e.target) == e.probability);
  }

  std::istringstream bad("a\tb\n");
  CHECK_THROWS_AS(TranslationTable::Read(bad), ParseError);
  std::istringstream bad_p("a\tb\t1.5\n");
  CHECK_THROWS_AS(TranslationTable::Read(bad_p), ParseError);
}

}  // namespace
}  // namespace distillens
