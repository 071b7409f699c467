/*
 * Copyright 2026 The RecipeForge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RECIPEFORGE_TESTS_ORACLES_HPP_
#define RECIPEFORGE_TESTS_ORACLES_HPP_

// Slow, direct reference computations that the library results are checked
// against. Nothing here calls into the code under test except for reading
// model outputs (scores, probabilities, votes).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "recipeforge/active_learning.hpp"
#include "recipeforge/models/linear.hpp"
#include "recipeforge/models/mlp.hpp"

namespace oracles {

using namespace recipeforge;

// Multinomial NB posterior by plain products of smoothed frequencies.
// docs[i] lists term ids (repeats count), vocab ids are 0..V-1.
inline std::array<double, kGenreCount> NaiveBayesPosterior(
    const std::vector<std::vector<int>>& docs, const std::vector<Genre>& labels, std::size_t V,
    double alpha, const std::vector<int>& query) {
  std::array<double, kGenreCount> docs_in{};
  std::vector<std::vector<double>> counts(kGenreCount, std::vector<double>(V, 0.0));
  std::array<double, kGenreCount> totals{};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const int c = GenreIndex(labels[i]);
    docs_in[c] += 1.0;
    for (int t : docs[i]) {
      counts[c][t] += 1.0;
      totals[c] += 1.0;
    }
  }
  std::array<double, kGenreCount> joint{};
  double z = 0.0;
  for (int c = 0; c < kGenreCount; ++c) {
    double p = docs_in[c] / static_cast<double>(docs.size());
    for (int t : query) p *= (counts[c][t] + alpha) / (totals[c] + alpha * static_cast<double>(V));
    joint[c] = p;
    z += p;
  }
  for (double& p : joint) p /= z;
  return joint;
}

// Mean cross-entropy of a softmax linear model, from its raw scores.
inline double SoftmaxLoss(const LinearModel& m, const std::vector<CountVector>& xs,
                          const std::vector<Genre>& ys) {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto s = m.Scores(xs[i]);
    double mx = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double v : s) z += std::exp(v - mx);
    total += mx + std::log(z) - s[GenreIndex(ys[i])];
  }
  return total / static_cast<double>(xs.size());
}

// Mean over examples of the summed one-vs-rest hinge losses.
inline double HingeLoss(const LinearModel& m, const std::vector<CountVector>& xs,
                        const std::vector<Genre>& ys) {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto s = m.Scores(xs[i]);
    for (int g = 0; g < kGenreCount; ++g) {
      const double t = g == GenreIndex(ys[i]) ? 1.0 : -1.0;
      total += std::max(0.0, 1.0 - t * s[g]);
    }
  }
  return total / static_cast<double>(xs.size());
}

// Smallest distance of any hinge term from its kink.
inline double HingeKinkDistance(const LinearModel& m, const std::vector<CountVector>& xs,
                                const std::vector<Genre>& ys) {
  double d = INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto s = m.Scores(xs[i]);
    for (int g = 0; g < kGenreCount; ++g) {
      const double t = g == GenreIndex(ys[i]) ? 1.0 : -1.0;
      d = std::min(d, std::abs(1.0 - t * s[g]));
    }
  }
  return d;
}

inline double MlpLoss(const MlpModel& m, const std::vector<TokenSequence>& xs, const std::vector<Genre>& ys) {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto z = m.Logits(xs[i]);
    double mx = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - mx);
    total += mx + std::log(s) - z[GenreIndex(ys[i])];
  }
  return total / static_cast<double>(xs.size());
}

// Central difference of `loss` with respect to *param.
inline double CentralDifference(double* param, const std::function<double()>& loss, double h = 1e-4) {
  const double keep = *param;
  *param = keep + h;
  const double up = loss();
  *param = keep - h;
  const double down = loss();
  *param = keep;
  return (up - down) / (2.0 * h);
}

inline double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

// Probability that a random positive outranks a random negative, ties half.
inline double PairCountingAuc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Fleiss' kappa straight from its definition. rows[i][j] = raters putting
// item i in category j.
inline double FleissKappaDirect(const std::vector<std::vector<std::size_t>>& rows) {
  const double N = static_cast<double>(rows.size());
  double n = 0.0;
  for (auto c : rows[0]) n += static_cast<double>(c);
  const std::size_t k = rows[0].size();
  std::vector<double> p(k, 0.0);
  double pbar = 0.0;
  for (const auto& row : rows) {
    double agree = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double c = static_cast<double>(row[j]);
      p[j] += c / (N * n);
      agree += c * (c - 1.0);
    }
    pbar += agree / (n * (n - 1.0)) / N;
  }
  double pe = 0.0;
  for (double v : p) pe += v * v;
  return (pbar - pe) / (1.0 - pe);
}

inline double EntropyOfVotes(const std::vector<Genre>& votes) {
  std::map<Genre, double> by_genre;
  for (Genre g : votes) by_genre[g] += 1.0;
  // Same multiset of counts must give the same bits whatever the genres.
  std::vector<double> counts;
  for (const auto& [g, c] : by_genre) counts.push_back(c);
  std::sort(counts.begin(), counts.end());
  double h = 0.0;
  for (double c : counts) {
    const double q = c / static_cast<double>(votes.size());
    h -= q * std::log(q);
  }
  return h;
}

// Scores every pool item, sorts the whole pool by (entropy desc, id asc) and
// keeps the first b.
inline std::vector<RecordId> ExhaustiveQueries(const Committee& committee,
                                               const std::vector<PoolItem>& pool, std::size_t b) {
  std::vector<std::pair<double, RecordId>> scored;
  for (const PoolItem& item : pool) scored.emplace_back(EntropyOfVotes(committee.Votes(item.features)), item.id);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<RecordId> out;
  for (std::size_t i = 0; i < std::min(b, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace oracles

#endif  // RECIPEFORGE_TESTS_ORACLES_HPP_
