//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SCORE_RANKING_HPP_
#define RXNAUG_SCORE_RANKING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "rxnaug/score/predictions.hpp"

namespace rxnaug::score {

// parse -> canonicalize fragments -> sort by the largest-fragment ordering ->
// join with ".". Unparseable text yields nullopt and is excluded downstream.
std::optional<std::string> normalize_prediction(const std::string &raw_text);

struct NormalizedPrediction {
  PredictionEntry entry;
  std::optional<std::string> canonical;
};

std::vector<NormalizedPrediction> normalize_entries(
    const std::vector<PredictionEntry> &entries);

// dedup_first keeps only the first occurrence of a canonical string within
// one variant's beam; keep_all counts every occurrence.
enum class AggregationMode { kDedupFirst, kKeepAll };

AggregationMode aggregation_mode_from_name(const std::string &name);

struct RankedCandidate {
  std::string canonical_text;
  double rank_value = 0.0;
  int occurrence_count = 0;
};

// Accumulates 1 / (1 + 0.001 * i) per surviving occurrence, where i is the
// 0-based beam position after invalid (and, in dedup_first, duplicate)
// removal. Candidates are sorted by rank descending, ties by first
// occurrence across (variant ascending, position ascending).
std::vector<RankedCandidate> rank_normalized(
    const std::vector<NormalizedPrediction> &entries, AggregationMode mode);

std::vector<RankedCandidate> rank_predictions(
    const std::vector<PredictionEntry> &entries, AggregationMode mode);

}  // namespace rxnaug::score

#endif  // RXNAUG_SCORE_RANKING_HPP_
