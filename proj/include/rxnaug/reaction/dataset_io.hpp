//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_REACTION_DATASET_IO_HPP_
#define RXNAUG_REACTION_DATASET_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "rxnaug/reaction/augment.hpp"

namespace rxnaug::reaction {

// One "source,target" line per pair, UTF-8, LF, newline-terminated.
std::string render_dataset(const std::vector<AugmentedPair> &pairs);
void write_dataset(const std::vector<AugmentedPair> &pairs,
                   const std::filesystem::path &path);

// Exact inverse of write_dataset. Lines must contain exactly one comma;
// reaction ids are assigned from line numbers.
std::vector<AugmentedPair> read_dataset(const std::filesystem::path &path);
std::vector<AugmentedPair> parse_dataset(const std::string &content);

}  // namespace rxnaug::reaction

#endif  // RXNAUG_REACTION_DATASET_IO_HPP_
