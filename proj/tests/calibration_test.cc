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

#include "distillens/calibration.h"

#include <cmath>
#include <random>

#include "distillens/errors.h"
#include "doctest.h"
#include "oracles.h"

namespace distillens {
namespace {

AttentionRecord Record(std::size_t rows, std::size_t cols,
                       std::vector<double> weights, std::size_t iteration = 1) {
  AttentionRecord r;
  r.iteration = iteration;
  r.rows = rows;
  r.cols = cols;
  r.weights = std::move(weights);
  return r;
}

TokenPredictionRecord Pred(double p, std::optional<bool> correct) {
  TokenPredictionRecord r;
  r.token = "t";
  r.probability = p;
  r.correct = correct;
  return r;
}

TEST_CASE("AttentionConfidence hand cases") {
  CHECK(AttentionConfidence(Record(2, 3, {0, 1, 0, 1, 0, 0})) == 1.0);
  CHECK(AttentionConfidence(Record(3, 4, std::vector<double>(12, 0.25))) == 0.25);
  CHECK(std::abs(AttentionConfidence(Record(2, 3, {0.6, 0.3, 0.1, 0.2, 0.5, 0.3})) -
                 0.55) <= 1e-9);
}

TEST_CASE("AttentionConfidence lies in (1/S, 1] unless rows are uniform") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng() % 5, cols = 2 + rng() % 6;
    std::vector<double> w(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < cols; ++c) sum += w[r * cols + c] = u(rng) + 1e-3;
      for (std::size_t c = 0; c < cols; ++c) w[r * cols + c] /= sum;
    }
    const double conf = AttentionConfidence(Record(rows, cols, w));
    CHECK(conf > 1.0 / cols);
    CHECK(conf <= 1.0);
  }
}

TEST_CASE("ConfidenceByIteration groups and averages") {
  const std::vector<AttentionRecord> one = {Record(1, 2, {0.5, 0.5}, 3)};
  CHECK(ConfidenceByIteration(one) == std::map<std::size_t, double>{{3, 0.5}});

  std::vector<AttentionRecord> records = {
      Record(1, 2, {1.0, 0.0}, 1), Record(1, 2, {0.5, 0.5}, 1),
      Record(1, 4, {0.25, 0.25, 0.25, 0.25}, 2)};
  records[1].head = 1;
  const auto curve = ConfidenceByIteration(records);
  REQUIRE(curve.size() == 2);
  CHECK(curve.at(1) == 0.75);
  CHECK(curve.at(2) == 0.25);
  CHECK_THROWS_AS(ConfidenceByIteration({}), DomainError);
}

Tokens T(const char *s) { return SplitTokens(s); }

TEST_CASE("TokenAccuracy hand cases") {
  CHECK(TokenAccuracy(T("a b c"), T("a b c")) == std::vector<bool>{true, true, true});
  CHECK(TokenAccuracy(T("a x c"), T("a b c")) == std::vector<bool>{true, false, true});
  CHECK(TokenAccuracy(T("a b"), T("b")) == std::vector<bool>{false, true});
  CHECK(TokenAccuracy({}, T("a")).empty());
  CHECK(TokenAccuracy(T("a a"), {}) == std::vector<bool>{false, false});
  // Either "a" could match; the earlier one does.
  CHECK(TokenAccuracy(T("a a"), T("a")) == std::vector<bool>{true, false});
}

TEST_CASE("TokenAccuracy matches exhaustive alignment search") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 400; ++trial) {
    Tokens hyp(rng() % 6), ref(rng() % 6);
    for (auto &w : hyp) w = std::string(1, static_cast<char>('a' + rng() % 3));
    for (auto &w : ref) w = std::string(1, static_cast<char>('a' + rng() % 3));
    CAPTURE(JoinTokens(hyp));
    CAPTURE(JoinTokens(ref));
    const auto labels = TokenAccuracy(hyp, ref);
    CHECK(labels == oracle::BruteForceTokenAccuracy(hyp, ref));
    CHECK(labels == TokenAccuracy(hyp, ref));
  }
}

TEST_CASE("ExpectedCalibrationError hand cases") {
  std::vector<TokenPredictionRecord> all_right(4, Pred(1.0, true));
  CHECK(ExpectedCalibrationError(all_right).ece == 0.0);

  std::vector<TokenPredictionRecord> half = {Pred(1.0, true), Pred(1.0, false)};
  CHECK(ExpectedCalibrationError(half).ece == 0.5);

  const std::vector<TokenPredictionRecord> pair = {Pred(0.9, true), Pred(0.7, false)};
  const CalibrationReport r = ExpectedCalibrationError(pair, 10);
  CHECK(std::abs(r.ece - 0.4) <= 1e-12);
  CHECK(r.accuracy == 0.5);
  CHECK(r.confidence == doctest::Approx(0.8));
  CHECK(r.token_count == 2);
  CHECK(r.bins[9].count == 1);
  CHECK(r.bins[7].count == 1);

  // Bin edges: 0.1 lands in bin 1, 1.0 in the last bin.
  const CalibrationReport edges =
      ExpectedCalibrationError(std::vector{Pred(0.1, true), Pred(1.0, true)}, 10);
  CHECK(edges.bins[1].count == 1);
  CHECK(edges.bins[9].count == 1);
}

TEST_CASE("ExpectedCalibrationError errors") {
  CHECK_THROWS_AS(ExpectedCalibrationError({}), DomainError);
  CHECK_THROWS_AS(ExpectedCalibrationError(std::vector{Pred(0.5, true)}, 0), DomainError);
  std::vector<TokenPredictionRecord> missing = {Pred(0.5, true), Pred(0.5, std::nullopt)};
  missing[1].sentence_id = 3;
  missing[1].position = 2;
  try {
    ExpectedCalibrationError(missing);
    FAIL("expected an error");
  } catch (const DomainError &e) {
    CHECK(std::string(e.what()).find('3') != std::string::npos);
  }
}

TEST_CASE("Bernoulli-sampled correctness is well calibrated") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TokenPredictionRecord> records;
  for (int i = 0; i < 100000; ++i) {
    const double c = u(rng);
    records.push_back(Pred(c, u(rng) < c));
  }
  const CalibrationReport r = ExpectedCalibrationError(records, 10);
  CHECK(r.ece < 0.02);
}

TEST_CASE("Bins are consistent with the report") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TokenPredictionRecord> records;
    const std::size_t n = 1 + rng() % 200;
    for (std::size_t i = 0; i < n; ++i) records.push_back(Pred(u(rng), rng() % 2 == 0));
    const std::size_t bins = 1 + rng() % 20;
    const CalibrationReport r = ExpectedCalibrationError(records, bins);
    std::size_t total = 0;
    for (const auto &b : r.bins) total += b.count;
    CHECK(total == n);
    CHECK(r.bins.size() == bins);
    CHECK(r.ece == EceFromBins(r.bins));
    CHECK(r.ece >= 0.0);
    CHECK(r.ece <= 1.0);
  }
}

TEST_CASE("AverageConfidence") {
  CHECK(AverageConfidence(std::vector{Pred(0.5, {}), Pred(0.5, {})}) == 0.5);
  CHECK(AverageConfidence(std::vector{Pred(1.0, {})}) == 1.0);
  CHECK(AverageConfidence(std::vector{Pred(0.2, {}), Pred(0.4, {}), Pred(0.9, {})}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(AverageConfidence({}), DomainError);
}

TEST_CASE("FillCorrectness") {
  const std::vector<Tokens> hyps = {T("a x c"), T("a b")};
  const std::vector<Tokens> refs = {T("a b c"), T("b")};
  std::vector<TokenPredictionRecord> records;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    for (std::size_t j = 0; j < hyps[s].size(); ++j) {
      records.push_back({s, j, hyps[s][j], 0.5, std::nullopt});
    }
  }
  records[1].correct = true;  // ingested flags are kept
  FillCorrectness(records, hyps, refs);
  CHECK(*records[0].correct);
  CHECK(*records[1].correct);
  CHECK(*records[2].correct);
  CHECK(!*records[3].correct);
  CHECK(*records[4].correct);

  std::vector<TokenPredictionRecord> wrong = {{0, 0, "q", 0.5, std::nullopt}};
  CHECK_THROWS_AS(FillCorrectness(wrong, hyps, refs), DomainError);
  std::vector<TokenPredictionRecord> outside = {{7, 0, "a", 0.5, std::nullopt}};
  CHECK_THROWS_AS(FillCorrectness(outside, hyps, refs), DomainError);
}

}  // namespace
}  // namespace distillens
