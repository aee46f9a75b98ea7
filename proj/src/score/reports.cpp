//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/score/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "rxnaug/smiles/parse.hpp"
#include "rxnaug/util/io.hpp"

namespace rxnaug::score {

namespace {

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

}  // namespace

bool ScoredReaction::correct_top_n(int n) const {
  return target.has_value() && top_n_correct(ranked, *target, n);
}

bool ScoredReaction::correct_maxfrag(int n) const {
  return target.has_value() && maxfrag_correct(ranked, target_maxfrag, n);
}

std::vector<ScoredReaction> score_reactions(
    const std::vector<PredictionEntry> &entries,
    const std::vector<TargetInfo> &targets, AggregationMode mode) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<ScoredReaction> reactions;
  reactions.reserve(targets.size());
  for (const TargetInfo &target : targets) {
    if (!index.try_emplace(target.reaction_id, reactions.size()).second) {
      throw DataError("duplicate reaction id in targets: " + target.reaction_id);
    }
    ScoredReaction reaction;
    reaction.id = target.reaction_id;
    reaction.class_label = target.class_label;
    reaction.target = normalize_prediction(target.target_text);
    if (reaction.target.has_value()) {
      reaction.target_maxfrag = maxfrag_reduce(*reaction.target);
    }
    reaction.stereo = smiles::contains_stereo(target.target_text);
    reactions.push_back(std::move(reaction));
  }

  for (const PredictionEntry &entry : entries) {
    const auto it = index.find(entry.reaction_id);
    if (it == index.end()) {
      throw DataError("prediction references unknown reaction id: " +
                      entry.reaction_id);
    }
    reactions[it->second].predictions.push_back(
        {entry, normalize_prediction(entry.raw_text)});
  }

  for (ScoredReaction &reaction : reactions) {
    reaction.ranked = rank_normalized(reaction.predictions, mode);
    reaction.confidence = confidence(reaction.predictions);
  }
  return reactions;
}

std::vector<MetricRow> subset_report(const std::vector<ScoredReaction> &reactions,
                                     const std::vector<std::string> &keys,
                                     const std::vector<int> &n_values,
                                     bool include_maxfrag) {
  for (const std::string &key : keys) {
    if (key != "stereo" && key != "class") {
      throw DataError("unknown grouping key: " + key);
    }
  }
  const bool by_stereo =
      std::find(keys.begin(), keys.end(), "stereo") != keys.end();
  const bool by_class =
      std::find(keys.begin(), keys.end(), "class") != keys.end();

  std::map<std::string, std::vector<const ScoredReaction *>> groups;
  for (const ScoredReaction &reaction : reactions) {
    groups["all"].push_back(&reaction);
    if (by_stereo) {
      groups[reaction.stereo ? "stereo" : "no_stereo"].push_back(&reaction);
    }
    if (by_class) {
      groups["class:" + (reaction.class_label.empty() ? "unlabeled"
                                                      : reaction.class_label)]
          .push_back(&reaction);
    }
  }

  std::vector<MetricRow> rows;
  for (const auto &[group, members] : groups) {
    for (int n : n_values) {
      std::size_t top_hits = 0;
      std::size_t maxfrag_hits = 0;
      for (const ScoredReaction *reaction : members) {
        top_hits += reaction->correct_top_n(n) ? 1 : 0;
        maxfrag_hits += reaction->correct_maxfrag(n) ? 1 : 0;
      }
      const double denom = static_cast<double>(members.size());
      rows.push_back({"top_n", group, n, top_hits / denom, members.size()});
      if (include_maxfrag) {
        rows.push_back(
            {"maxfrag", group, n, maxfrag_hits / denom, members.size()});
      }
    }
  }
  return rows;
}

std::vector<BeamPositionStat> beam_position_report(
    const std::vector<ScoredReaction> &reactions) {
  struct Tally {
    std::size_t total = 0;
    std::size_t valid = 0;
    std::size_t matching = 0;
  };
  std::map<int, Tally> by_position;
  for (const ScoredReaction &reaction : reactions) {
    for (const NormalizedPrediction &prediction : reaction.predictions) {
      Tally &tally = by_position[prediction.entry.beam_position];
      ++tally.total;
      if (prediction.canonical.has_value()) {
        ++tally.valid;
        if (reaction.target.has_value() &&
            *prediction.canonical == *reaction.target) {
          ++tally.matching;
        }
      }
    }
  }
  std::vector<BeamPositionStat> stats;
  for (const auto &[position, tally] : by_position) {
    BeamPositionStat stat;
    stat.position = position;
    stat.total = tally.total;
    stat.accuracy = tally.valid == 0 ? 0.0
                                     : static_cast<double>(tally.matching) /
                                           static_cast<double>(tally.valid);
    stat.invalid_rate = static_cast<double>(tally.total - tally.valid) /
                        static_cast<double>(tally.total);
    stats.push_back(stat);
  }
  return stats;
}

std::string render_metric_rows(const std::vector<MetricRow> &rows) {
  std::string out = "# rxnaug report v1\nmetric,group,n,value,count\n";
  for (const MetricRow &row : rows) {
    out += row.metric + "," + row.group + "," + std::to_string(row.n) + "," +
           format_double(row.value) + "," + std::to_string(row.count) + "\n";
  }
  return out;
}

std::string render_confidence_curve(const std::vector<ConfidenceBin> &bins) {
  std::string out = "# rxnaug report v1\nbin_upper,accuracy\n";
  for (const ConfidenceBin &bin : bins) {
    out += format_double(bin.upper) + "," + format_double(bin.accuracy) + "\n";
  }
  return out;
}

std::string render_confidence_density(const std::vector<ConfidenceBin> &bins) {
  std::string out = "# rxnaug report v1\nbin_upper,density\n";
  for (const ConfidenceBin &bin : bins) {
    out += format_double(bin.upper) + "," + format_double(bin.density) + "\n";
  }
  return out;
}

std::string render_beam_positions(const std::vector<BeamPositionStat> &stats) {
  std::string out = "# rxnaug report v1\nposition,accuracy,invalid_rate,total\n";
  for (const BeamPositionStat &stat : stats) {
    out += std::to_string(stat.position) + "," + format_double(stat.accuracy) +
           "," + format_double(stat.invalid_rate) + "," +
           std::to_string(stat.total) + "\n";
  }
  return out;
}

}  // namespace rxnaug::score
