//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/score/predictions.hpp"

#include <charconv>
#include <cstdio>

#include "rxnaug/util/io.hpp"

namespace rxnaug::score {

std::string render_predictions(const std::vector<PredictionEntry> &entries) {
  std::string out = "# rxnaug predictions v1\n";
  char score[64];
  for (const PredictionEntry &entry : entries) {
    std::snprintf(score, sizeof(score), "%.9g", entry.decoder_score);
    out += entry.reaction_id;
    out += '\t';
    out += std::to_string(entry.variant_index);
    out += '\t';
    out += std::to_string(entry.beam_position);
    out += '\t';
    out += score;
    out += '\t';
    out += entry.raw_text;
    out += '\n';
  }
  return out;
}

void write_predictions(const std::vector<PredictionEntry> &entries,
                       const std::filesystem::path &path) {
  write_file_atomic(path, render_predictions(entries));
}

std::vector<PredictionEntry> parse_predictions(const std::string &content) {
  std::vector<PredictionEntry> entries;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) {
      end = content.size();
    }
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        throw DataError("predictions line " + std::to_string(line_no) +
                        ": expected 5 tab-separated fields");
      }
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    fields.push_back(line.substr(pos));

    PredictionEntry entry;
    entry.reaction_id = fields[0];
    try {
      entry.variant_index = std::stoi(fields[1]);
      entry.beam_position = std::stoi(fields[2]);
      entry.decoder_score = std::stod(fields[3]);
    } catch (const std::exception &) {
      throw DataError("predictions line " + std::to_string(line_no) +
                      ": malformed numeric field");
    }
    entry.raw_text = fields[4];
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<PredictionEntry> read_predictions(
    const std::filesystem::path &path) {
  return parse_predictions(read_file(path));
}

}  // namespace rxnaug::score
