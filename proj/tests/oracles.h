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

// Reference implementations used only by tests. They share no code with the
// library and favor obviousness over speed.

#ifndef DISTILLENS_TESTS_ORACLES_H_
#define DISTILLENS_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace distillens::oracle {

// `map[j]` is the source index of target j, or -1 when unaligned. Splits the
// aligned values into maximal runs of +1 steps and scores
// 1 - (runs - 1) / (aligned - 1).
inline double NaiveFrs(const std::vector<int> &map) {
  std::vector<int> values;
  for (int v : map) {
    if (v >= 0) values.push_back(v);
  }
  if (values.size() <= 1) return 1.0;
  std::vector<std::vector<int>> runs;
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    while (end < values.size() && values[end] == values[end - 1] + 1) ++end;
    runs.emplace_back(values.begin() + start, values.begin() + end);
    start = end;
  }
  return 1.0 - static_cast<double>(runs.size() - 1) /
                   static_cast<double>(values.size() - 1);
}

// counts[x][y]; rows with zero total are not part of the vocabulary.
inline double DirectEntropyMean(const std::vector<std::vector<double>> &counts) {
  double sum = 0.0;
  int vocab = 0;
  for (const auto &row : counts) {
    double total = 0.0;
    for (double c : row) total += c;
    if (total <= 0.0) continue;
    ++vocab;
    double h = 0.0;
    for (double c : row) {
      if (c > 0.0) h += -(c / total) * std::log(c / total);
    }
    sum += h;
  }
  return sum / vocab;
}

// real[x][y] and distilled[x][y] share the target index space.
inline double DirectFaithfulness(const std::vector<std::vector<double>> &real,
                                 const std::vector<std::vector<double>> &distilled,
                                 double alpha) {
  double sum = 0.0;
  int vocab = 0;
  for (std::size_t x = 0; x < real.size(); ++x) {
    double rt = 0.0, dt = 0.0;
    for (double c : real[x]) rt += c;
    for (double c : distilled[x]) dt += c;
    if (rt <= 0.0) continue;
    ++vocab;
    int support = 0;
    for (std::size_t y = 0; y < real[x].size(); ++y) {
      if (real[x][y] > 0.0 || (dt > 0.0 && distilled[x][y] > 0.0)) ++support;
    }
    double kl = 0.0;
    for (std::size_t y = 0; y < real[x].size(); ++y) {
      if (real[x][y] <= 0.0) continue;
      const double p = real[x][y] / rt;
      const double q = dt > 0.0
                           ? (distilled[x][y] / dt + alpha) / (1.0 + alpha * support)
                           : 1.0 / support;
      kl += p * std::log(p / q);
    }
    sum += kl;
  }
  return sum / vocab;
}

// Enumerates every edit path between hyp and ref and returns the labels of
// the best one: fewest edits, then most matches, then the lexicographically
// largest label vector (true before false at the first difference).
inline std::vector<bool> BruteForceTokenAccuracy(
    const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
  struct Best {
    int cost = 1 << 30;
    int matches = -1;
    std::vector<bool> labels;
  } best;
  std::vector<bool> labels(hyp.size(), false);
  std::function<void(std::size_t, std::size_t, int, int)> walk =
      [&](std::size_t i, std::size_t j, int cost, int matches) {
        if (i == hyp.size() && j == ref.size()) {
          const bool better =
              cost < best.cost ||
              (cost == best.cost &&
               (matches > best.matches ||
                (matches == best.matches &&
                 std::lexicographical_compare(
                     best.labels.begin(), best.labels.end(), labels.begin(),
                     labels.end()))));
          if (better) best = {cost, matches, labels};
          return;
        }
        if (i < hyp.size() && j < ref.size()) {
          const bool eq = hyp[i] == ref[j];
          labels[i] = eq;
          walk(i + 1, j + 1, cost + (eq ? 0 : 1), matches + (eq ? 1 : 0));
          labels[i] = false;
        }
        if (i < hyp.size()) walk(i + 1, j, cost + 1, matches);
        if (j < ref.size()) walk(i, j + 1, cost + 1, matches);
      };
  walk(0, 0, 0, 0);
  return best.labels;
}

}  // namespace distillens::oracle

#endif  // DISTILLENS_TESTS_ORACLES_H_
