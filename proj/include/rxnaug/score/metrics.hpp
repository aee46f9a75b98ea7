//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SCORE_METRICS_HPP_
#define RXNAUG_SCORE_METRICS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "rxnaug/score/ranking.hpp"

namespace rxnaug::score {

// True iff the normalized target appears among the first n ranked candidates.
bool top_n_correct(const std::vector<RankedCandidate> &ranked,
                   const std::string &normalized_target, int n);

// Largest-fragment canonical form of an already-normalized string.
std::string maxfrag_reduce(const std::string &normalized);

// Candidates reduced to their largest fragment, deduplicated preserving
// first-occurrence order; correct if the reduced target is in the first n.
bool maxfrag_correct(const std::vector<RankedCandidate> &ranked,
                     const std::string &target_maxfrag, int n);

// Positional character matches divided by the longer length.
double character_accuracy(const std::string &predicted,
                          const std::string &target);

// Exact raw-string equality (pre-canonicalization monitoring semantics).
bool sequence_accuracy(const std::string &predicted, const std::string &target);

// Occurrences of the modal canonical string over all valid predictions;
// nullopt when no prediction is valid.
std::optional<double> confidence(const std::vector<NormalizedPrediction> &entries);

// ((100-old) - (100-new)) / (100-old), accuracies in percent, old < 100.
double relative_error_reduction(double old_accuracy_pct,
                                double new_accuracy_pct);

struct ConfidenceBin {
  double lower = 0.0;
  double upper = 0.0;
  double accuracy = 0.0;
  double density = 0.0;
  std::size_t count = 0;
};

// Bins (confidence, correctness) observations by the given interior edges.
// With cumulative_left, each bin's accuracy averages every observation at or
// below the bin's upper edge, the sparse-low-bin smoothing used for the
// confidence curves.
std::vector<ConfidenceBin> confidence_bins(
    const std::vector<std::pair<double, bool>> &observations,
    const std::vector<double> &edges, bool cumulative_left = false);

}  // namespace rxnaug::score

#endif  // RXNAUG_SCORE_METRICS_HPP_
