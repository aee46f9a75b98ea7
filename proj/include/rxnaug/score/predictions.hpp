//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SCORE_PREDICTIONS_HPP_
#define RXNAUG_SCORE_PREDICTIONS_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace rxnaug::score {

// One decoded sequence for one input variant. (reaction_id, variant_index,
// beam_position) is unique; beam_position is the raw decoder position.
struct PredictionEntry {
  std::string reaction_id;
  int variant_index = 0;
  int beam_position = 0;
  double decoder_score = 0.0;
  std::string raw_text;
};

// Tab-separated: reaction_id, variant_index, beam_position, decoder_score,
// raw_text. Lines starting with '#' are headers/comments.
std::string render_predictions(const std::vector<PredictionEntry> &entries);
void write_predictions(const std::vector<PredictionEntry> &entries,
                       const std::filesystem::path &path);
std::vector<PredictionEntry> parse_predictions(const std::string &content);
std::vector<PredictionEntry> read_predictions(const std::filesystem::path &path);

}  // namespace rxnaug::score

#endif  // RXNAUG_SCORE_PREDICTIONS_HPP_
