//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/reaction/dataset_io.hpp"

#include <algorithm>

#include "rxnaug/util/io.hpp"

namespace rxnaug::reaction {

std::string render_dataset(const std::vector<AugmentedPair> &pairs) {
  std::string out;
  for (const AugmentedPair &pair : pairs) {
    out += pair.source;
    out += ',';
    out += pair.target;
    out += '\n';
  }
  return out;
}

void write_dataset(const std::vector<AugmentedPair> &pairs,
                   const std::filesystem::path &path) {
  write_file_atomic(path, render_dataset(pairs));
}

std::vector<AugmentedPair> parse_dataset(const std::string &content) {
  std::vector<AugmentedPair> pairs;
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
    if (line.empty()) {
      continue;
    }
    if (std::count(line.begin(), line.end(), ',') != 1) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected exactly one comma: " + line);
    }
    const std::size_t comma = line.find(',');
    AugmentedPair pair;
    pair.source = line.substr(0, comma);
    pair.target = line.substr(comma + 1);
    pair.reaction_id = std::to_string(line_no - 1);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<AugmentedPair> read_dataset(const std::filesystem::path &path) {
  return parse_dataset(read_file(path));
}

}  // namespace rxnaug::reaction
