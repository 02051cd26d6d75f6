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

// Confidence and calibration of exported model outputs: attention
// concentration per decoding iteration, token accuracy against a reference,
// and expected calibration error.

#ifndef DISTILLENS_CALIBRATION_H_
#define DISTILLENS_CALIBRATION_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "distillens/corpus_io.h"

namespace distillens {

inline constexpr std::size_t kDefaultCalibrationBins = 10;

struct CalibrationBin {
  std::size_t count = 0;
  double confidence = 0.0;  // mean; 0 for an empty bin
  double accuracy = 0.0;    // mean; 0 for an empty bin
};

// Fractions in [0,1].
struct CalibrationReport {
  double accuracy = 0.0;
  double confidence = 0.0;
  double ece = 0.0;
  std::size_t token_count = 0;
  std::vector<CalibrationBin> bins;
};

// Mean over target rows of the largest attention weight in the row.
double AttentionConfidence(const AttentionRecord &record);

// Iteration -> mean AttentionConfidence over every record (all sentences and
// heads) at that iteration. Throws DomainError on empty input.
std::map<std::size_t, double> ConfidenceByIteration(
    std::span<const AttentionRecord> records);

// Marks each hypothesis token correct iff a minimum edit distance alignment
// (unit insert/delete/substitute costs) matches it to an identical reference
// token. Among minimum-cost alignments the one with the most matches wins;
// remaining ties favor matching earlier hypothesis tokens.
std::vector<bool> TokenAccuracy(std::span<const std::string> hypothesis,
                                std::span<const std::string> reference);

// Fills missing `correct` flags from TokenAccuracy of hypotheses[sentence_id]
// against references[sentence_id]. Records keep their flag when they have
// one. Throws DomainError if a record points outside the hypotheses or its
// token disagrees with the hypothesis text.
void FillCorrectness(std::span<TokenPredictionRecord> records,
                     std::span<const Tokens> hypotheses,
                     std::span<const Tokens> references);

// Equal-width bins over [0,1]; confidence c falls in bin
// min(floor(c * n_bins), n_bins - 1). ECE = sum_m |B_m| / N * |acc_m - conf_m|.
// Throws DomainError when a record has no correctness flag, for no records,
// or for n_bins == 0.
CalibrationReport ExpectedCalibrationError(
    std::span<const TokenPredictionRecord> records,
    std::size_t n_bins = kDefaultCalibrationBins);

// ECE recomputed from the per-bin summaries.
double EceFromBins(std::span<const CalibrationBin> bins);

// Mean token probability. Throws DomainError on empty input.
double AverageConfidence(std::span<const TokenPredictionRecord> records);

}  // namespace distillens

#endif  // DISTILLENS_CALIBRATION_H_
