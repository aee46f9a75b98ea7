//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/score/metrics.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "rxnaug/util/io.hpp"

namespace rxnaug::score {

bool top_n_correct(const std::vector<RankedCandidate> &ranked,
                   const std::string &normalized_target, int n) {
  const std::size_t limit = std::min<std::size_t>(n, ranked.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (ranked[i].canonical_text == normalized_target) {
      return true;
    }
  }
  return false;
}

std::string maxfrag_reduce(const std::string &normalized) {
  // Normalized strings order fragments largest-first, so the reduction is
  // the first "." piece.
  const std::size_t dot = normalized.find('.');
  return dot == std::string::npos ? normalized : normalized.substr(0, dot);
}

bool maxfrag_correct(const std::vector<RankedCandidate> &ranked,
                     const std::string &target_maxfrag, int n) {
  std::unordered_set<std::string> seen;
  int position = 0;
  for (const RankedCandidate &candidate : ranked) {
    const std::string reduced = maxfrag_reduce(candidate.canonical_text);
    if (!seen.insert(reduced).second) {
      continue;
    }
    if (position < n && reduced == target_maxfrag) {
      return true;
    }
    ++position;
    if (position >= n) {
      break;
    }
  }
  return false;
}

double character_accuracy(const std::string &predicted,
                          const std::string &target) {
  const std::size_t longer = std::max(predicted.size(), target.size());
  if (longer == 0) {
    return 1.0;
  }
  const std::size_t shorter = std::min(predicted.size(), target.size());
  std::size_t matches = 0;
  for (std::size_t i = 0; i < shorter; ++i) {
    if (predicted[i] == target[i]) {
      ++matches;
    }
  }
  return static_cast<double>(matches) / static_cast<double>(longer);
}

bool sequence_accuracy(const std::string &predicted, const std::string &target) {
  return predicted == target;
}

std::optional<double> confidence(
    const std::vector<NormalizedPrediction> &entries) {
  std::unordered_map<std::string, int> counts;
  int valid = 0;
  int modal = 0;
  for (const NormalizedPrediction &entry : entries) {
    if (!entry.canonical.has_value()) {
      continue;
    }
    ++valid;
    modal = std::max(modal, ++counts[*entry.canonical]);
  }
  if (valid == 0) {
    return std::nullopt;
  }
  return static_cast<double>(modal) / static_cast<double>(valid);
}

double relative_error_reduction(double old_accuracy_pct,
                                double new_accuracy_pct) {
  if (old_accuracy_pct >= 100.0) {
    throw NumericError("relative error reduction undefined for old accuracy = 100");
  }
  return ((100.0 - old_accuracy_pct) - (100.0 - new_accuracy_pct)) /
         (100.0 - old_accuracy_pct);
}

std::vector<ConfidenceBin> confidence_bins(
    const std::vector<std::pair<double, bool>> &observations,
    const std::vector<double> &edges, bool cumulative_left) {
  if (observations.empty()) {
    throw DataError("confidence_bins requires at least one observation");
  }
  std::vector<double> bounds = edges;
  std::sort(bounds.begin(), bounds.end());

  std::vector<ConfidenceBin> bins(bounds.size() + 1);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].lower = b == 0 ? 0.0 : bounds[b - 1];
    bins[b].upper = b < bounds.size() ? bounds[b] : 1.0;
  }
  std::vector<std::size_t> hits(bins.size(), 0);
  for (const auto &[conf, correct] : observations) {
    std::size_t b =
        std::upper_bound(bounds.begin(), bounds.end(), conf) - bounds.begin();
    ++bins[b].count;
    if (correct) {
      ++hits[b];
    }
  }
  const double total = static_cast<double>(observations.size());
  std::size_t cum_count = 0;
  std::size_t cum_hits = 0;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    cum_count += bins[b].count;
    cum_hits += hits[b];
    bins[b].density = static_cast<double>(bins[b].count) / total;
    if (cumulative_left) {
      bins[b].accuracy = cum_count == 0 ? 0.0
                                        : static_cast<double>(cum_hits) /
                                              static_cast<double>(cum_count);
    } else {
      bins[b].accuracy = bins[b].count == 0
                             ? 0.0
                             : static_cast<double>(hits[b]) /
                                   static_cast<double>(bins[b].count);
    }
  }
  return bins;
}

}  // namespace rxnaug::score
