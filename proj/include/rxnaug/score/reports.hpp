//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SCORE_REPORTS_HPP_
#define RXNAUG_SCORE_REPORTS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rxnaug/score/metrics.hpp"
#include "rxnaug/score/ranking.hpp"

namespace rxnaug::score {

// Everything scoring needs about one test reaction.
struct ScoredReaction {
  std::string id;
  std::string class_label;
  std::optional<std::string> target;  // normalized; nullopt if unparseable
  std::string target_maxfrag;
  bool stereo = false;
  std::vector<NormalizedPrediction> predictions;  // raw order, with validity
  std::vector<RankedCandidate> ranked;
  std::optional<double> confidence;

  bool correct_top_n(int n) const;
  bool correct_maxfrag(int n) const;
};

struct TargetInfo {
  std::string reaction_id;
  std::string target_text;  // raw target SMILES
  std::string class_label;
};

// Groups prediction entries by reaction id, normalizes, ranks, and attaches
// targets. Throws DataError when predictions reference unknown reaction ids.
// Targets without predictions score as incorrect (empty ranked list).
std::vector<ScoredReaction> score_reactions(
    const std::vector<PredictionEntry> &entries,
    const std::vector<TargetInfo> &targets, AggregationMode mode);

struct MetricRow {
  std::string metric;  // "top_n" | "maxfrag"
  std::string group;   // "all", "stereo", "no_stereo", "class:<label>"
  int n = 0;
  double value = 0.0;
  std::size_t count = 0;
};

// Per-group accuracy table. Keys: "stereo" and/or "class"; every metric is
// also reported for group "all". Unknown keys raise DataError.
std::vector<MetricRow> subset_report(const std::vector<ScoredReaction> &reactions,
                                     const std::vector<std::string> &keys,
                                     const std::vector<int> &n_values,
                                     bool include_maxfrag);

struct BeamPositionStat {
  int position = 0;
  std::size_t total = 0;
  double accuracy = 0.0;      // matching / valid at this position
  double invalid_rate = 0.0;  // invalid / total at this position
};

// Pre-deduplication per-position quality, aggregated over all reactions and
// variants.
std::vector<BeamPositionStat> beam_position_report(
    const std::vector<ScoredReaction> &reactions);

// CSV renderers. Every file starts with a "# rxnaug report v1" header line.
std::string render_metric_rows(const std::vector<MetricRow> &rows);
std::string render_confidence_curve(const std::vector<ConfidenceBin> &bins);
std::string render_confidence_density(const std::vector<ConfidenceBin> &bins);
std::string render_beam_positions(const std::vector<BeamPositionStat> &stats);

}  // namespace rxnaug::score

#endif  // RXNAUG_SCORE_REPORTS_HPP_
