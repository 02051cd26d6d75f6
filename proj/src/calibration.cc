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

#include <algorithm>
#include <cmath>
#include <utility>

#include "distillens/errors.h"

namespace distillens {

double AttentionConfidence(const AttentionRecord &record) {
  if (record.rows == 0 || record.cols == 0) {
    throw DomainError("attention confidence of an empty matrix");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < record.rows; ++t) {
    const auto row = record.row(t);
    sum += *std::max_element(row.begin(), row.end());
  }
  return sum / static_cast<double>(record.rows);
}

std::map<std::size_t, double> ConfidenceByIteration(
    std::span<const AttentionRecord> records) {
  if (records.empty()) throw DomainError("no attention records");
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const AttentionRecord &r : records) {
    auto &[sum, n] = acc[r.iteration];
    sum += AttentionConfidence(r);
    ++n;
  }
  std::map<std::size_t, double> curve;
  for (const auto &[iteration, sn] : acc) {
    curve[iteration] = sn.first / static_cast<double>(sn.second);
  }
  return curve;
}

namespace {

// Lexicographic edit objective: fewer edits first, then more matches.
struct EditScore {
  int cost = 0;
  int matches = 0;

  bool operator==(const EditScore &) const = default;
};

bool Better(EditScore a, EditScore b) {
  return a.cost < b.cost || (a.cost == b.cost && a.matches > b.matches);
}

}  // namespace

std::vector<bool> TokenAccuracy(std::span<const std::string> hypothesis,
                                std::span<const std::string> reference) {
  const std::size_t n = hypothesis.size();
  const std::size_t m = reference.size();

  // suffix[i][j]: best score for aligning hypothesis[i:] with reference[j:].
  std::vector<std::vector<EditScore>> suffix(n + 1,
                                             std::vector<EditScore>(m + 1));
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) continue;
      EditScore best{1 << 30, 0};
      if (i < n && j < m) {
        EditScore s = suffix[i + 1][j + 1];
        if (hypothesis[i] == reference[j]) {
          ++s.matches;
        } else {
          ++s.cost;
        }
        if (Better(s, best)) best = s;
      }
      if (i < n) {
        EditScore s = suffix[i + 1][j];
        ++s.cost;
        if (Better(s, best)) best = s;
      }
      if (j < m) {
        EditScore s = suffix[i][j + 1];
        ++s.cost;
        if (Better(s, best)) best = s;
      }
      suffix[i][j] = best;
    }
  }
  const EditScore target = suffix[0][0];

  // Walk hypothesis positions in order, keeping every reference position
  // (with its cheapest prefix cost) that still lies on an optimal path
  // consistent with the labels chosen so far. A token is labelled correct
  // whenever some optimal continuation matches it.
  constexpr int kDead = -1;
  std::vector<int> frontier(m + 1, kDead);
  frontier[0] = 0;
  int matches_so_far = 0;
  std::vector<bool> labels(n, false);

  auto on_path = [&](std::size_t i, std::size_t j, int cost, int matches) {
    return cost + suffix[i][j].cost == target.cost &&
           matches + suffix[i][j].matches == target.matches;
  };

  for (std::size_t i = 0; i < n; ++i) {
    // Reference-only moves stay on this row.
    for (std::size_t j = 0; j < m; ++j) {
      if (frontier[j] == kDead) continue;
      const int c = frontier[j] + 1;
      if (frontier[j + 1] == kDead || c < frontier[j + 1]) frontier[j + 1] = c;
    }
    for (std::size_t j = 0; j <= m; ++j) {
      if (frontier[j] != kDead && !on_path(i, j, frontier[j], matches_so_far)) {
        frontier[j] = kDead;
      }
    }

    std::vector<int> next(m + 1, kDead);
    auto relax = [&](std::size_t j, int cost) {
      if (next[j] == kDead || cost < next[j]) next[j] = cost;
    };

    bool matched = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (frontier[j] == kDead || hypothesis[i] != reference[j]) continue;
      if (on_path(i + 1, j + 1, frontier[j], matches_so_far + 1)) {
        relax(j + 1, frontier[j]);
        matched = true;
      }
    }
    if (matched) {
      labels[i] = true;
      ++matches_so_far;
    } else {
      for (std::size_t j = 0; j <= m; ++j) {
        if (frontier[j] == kDead) continue;
        const int c = frontier[j] + 1;
        if (j < m && hypothesis[i] != reference[j] &&
            on_path(i + 1, j + 1, c, matches_so_far)) {
          relax(j + 1, c);
        }
        if (on_path(i + 1, j, c, matches_so_far)) relax(j, c);
      }
    }
    frontier = std::move(next);
  }
  return labels;
}

void FillCorrectness(std::span<TokenPredictionRecord> records,
                     std::span<const Tokens> hypotheses,
                     std::span<const Tokens> references) {
  if (hypotheses.size() != references.size()) {
    throw DomainError("hypothesis file has " +
                      std::to_string(hypotheses.size()) +
                      " lines but reference file has " +
                      std::to_string(references.size()));
  }
  std::vector<std::vector<bool>> labels(hypotheses.size());
  std::vector<bool> done(hypotheses.size(), false);
  for (std::size_t k = 0; k < records.size(); ++k) {
    TokenPredictionRecord &r = records[k];
    if (r.sentence_id >= hypotheses.size() ||
        r.position >= hypotheses[r.sentence_id].size()) {
      throw DomainError("prediction record " + std::to_string(k + 1) +
                        " (sentence " + std::to_string(r.sentence_id) +
                        ", position " + std::to_string(r.position) +
                        ") has no matching hypothesis token");
    }
    if (hypotheses[r.sentence_id][r.position] != r.token) {
      throw DomainError("prediction record " + std::to_string(k + 1) +
                        " token '" + r.token +
                        "' differs from hypothesis token '" +
                        hypotheses[r.sentence_id][r.position] + "'");
    }
    if (r.correct) continue;
    if (!done[r.sentence_id]) {
      labels[r.sentence_id] =
          TokenAccuracy(hypotheses[r.sentence_id], references[r.sentence_id]);
      done[r.sentence_id] = true;
    }
    r.correct = labels[r.sentence_id][r.position];
  }
}

double EceFromBins(std::span<const CalibrationBin> bins) {
  std::size_t total = 0;
  for (const CalibrationBin &b : bins) total += b.count;
  if (total == 0) return 0.0;
  double ece = 0.0;
  for (const CalibrationBin &b : bins) {
    if (b.count == 0) continue;
    ece += static_cast<double>(b.count) / static_cast<double>(total) *
           std::abs(b.accuracy - b.confidence);
  }
  return ece;
}

CalibrationReport ExpectedCalibrationError(
    std::span<const TokenPredictionRecord> records, std::size_t n_bins) {
  if (n_bins == 0) throw DomainError("ECE needs at least one bin");
  if (records.empty()) throw DomainError("ECE of an empty prediction set");

  std::vector<double> conf_sum(n_bins, 0.0);
  std::vector<std::size_t> correct(n_bins, 0);
  CalibrationReport report;
  report.bins.resize(n_bins);
  double total_conf = 0.0;
  std::size_t total_correct = 0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const TokenPredictionRecord &r = records[k];
    if (!r.correct) {
      throw DomainError("prediction record " + std::to_string(k + 1) +
                        " (sentence " + std::to_string(r.sentence_id) +
                        ", position " + std::to_string(r.position) +
                        ") has no correctness flag");
    }
    const double c = r.probability;
    const std::size_t bin = std::min(
        static_cast<std::size_t>(std::floor(c * static_cast<double>(n_bins))),
        n_bins - 1);
    ++report.bins[bin].count;
    conf_sum[bin] += c;
    total_conf += c;
    if (*r.correct) {
      ++correct[bin];
      ++total_correct;
    }
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    CalibrationBin &bin = report.bins[b];
    if (bin.count == 0) continue;
    bin.confidence = conf_sum[b] / static_cast<double>(bin.count);
    bin.accuracy =
        static_cast<double>(correct[b]) / static_cast<double>(bin.count);
  }
  const double n = static_cast<double>(records.size());
  report.token_count = records.size();
  report.accuracy = static_cast<double>(total_correct) / n;
  report.confidence = total_conf / n;
  report.ece = EceFromBins(report.bins);
  return report;
}

double AverageConfidence(std::span<const TokenPredictionRecord> records) {
  if (records.empty()) throw DomainError("average confidence of no tokens");
  double sum = 0.0;
  for (const TokenPredictionRecord &r : records) sum += r.probability;
  return sum / static_cast<double>(records.size());
}

}  // namespace distillens
