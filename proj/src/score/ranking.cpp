//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/score/ranking.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "rxnaug/util/io.hpp"

namespace rxnaug::score {

AggregationMode aggregation_mode_from_name(const std::string &name) {
  if (name == "dedup_first") {
    return AggregationMode::kDedupFirst;
  }
  if (name == "keep_all") {
    return AggregationMode::kKeepAll;
  }
  throw DataError("unknown aggregation mode: " + name);
}

std::vector<RankedCandidate> rank_normalized(
    const std::vector<NormalizedPrediction> &entries, AggregationMode mode) {
  // Bucket by variant, ordered by (variant, beam position) regardless of
  // input order.
  std::map<int, std::vector<const NormalizedPrediction *>> beams;
  for (const NormalizedPrediction &entry : entries) {
    beams[entry.entry.variant_index].push_back(&entry);
  }

  struct Accumulator {
    double rank = 0.0;
    int count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Accumulator> accum;
  std::size_t sequence = 0;

  for (auto &[variant, beam] : beams) {
    std::sort(beam.begin(), beam.end(),
              [](const NormalizedPrediction *x, const NormalizedPrediction *y) {
                return x->entry.beam_position < y->entry.beam_position;
              });
    std::set<std::string> seen_in_beam;
    int position = 0;  // re-indexed after removing invalids (and duplicates)
    for (const NormalizedPrediction *entry : beam) {
      if (!entry->canonical.has_value()) {
        continue;
      }
      const std::string &text = *entry->canonical;
      if (mode == AggregationMode::kDedupFirst &&
          !seen_in_beam.insert(text).second) {
        continue;
      }
      auto [it, inserted] = accum.try_emplace(text);
      if (inserted) {
        it->second.first_seen = sequence;
      }
      ++sequence;
      it->second.rank += 1.0 / (1.0 + 0.001 * position);
      it->second.count += 1;
      ++position;
    }
  }

  std::vector<std::pair<std::string, Accumulator>> flat(accum.begin(),
                                                        accum.end());
  std::sort(flat.begin(), flat.end(), [](const auto &x, const auto &y) {
    if (x.second.rank != y.second.rank) {
      return x.second.rank > y.second.rank;
    }
    return x.second.first_seen < y.second.first_seen;
  });

  std::vector<RankedCandidate> ranked;
  ranked.reserve(flat.size());
  for (auto &[text, acc] : flat) {
    ranked.push_back({text, acc.rank, acc.count});
  }
  return ranked;
}

std::vector<RankedCandidate> rank_predictions(
    const std::vector<PredictionEntry> &entries, AggregationMode mode) {
  return rank_normalized(normalize_entries(entries), mode);
}

}  // namespace rxnaug::score
