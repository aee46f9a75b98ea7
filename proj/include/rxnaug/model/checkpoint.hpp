//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_MODEL_CHECKPOINT_HPP_
#define RXNAUG_MODEL_CHECKPOINT_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "rxnaug/model/transformer.hpp"
#include "rxnaug/model/vocab.hpp"

namespace rxnaug::model {

// Named-tensor snapshot of one training state. The on-disk format is a
// versioned binary container: magic, JSON header with shape/stride metadata,
// then raw little-endian float64 data.
struct Checkpoint {
  std::map<std::string, Mat> tensors;
  int epoch = 0;
  double train_exact_match = 0.0;
  ModelConfig config;
  std::string vocab_chars;

  static Checkpoint snapshot(const TransformerParams &params,
                             const ModelConfig &config, const Vocabulary &vocab,
                             int epoch, double train_exact_match);
  TransformerParams restore() const;
  Vocabulary vocabulary() const { return Vocabulary::from_chars(vocab_chars); }
};

// Element-wise arithmetic mean; key sets and shapes must agree. The result
// carries the latest member epoch and a zero accuracy (callers re-evaluate).
Checkpoint average_checkpoints(const std::vector<Checkpoint> &checkpoints);

void save_checkpoint(const Checkpoint &checkpoint,
                     const std::filesystem::path &path);
Checkpoint load_checkpoint(const std::filesystem::path &path);

}  // namespace rxnaug::model

#endif  // RXNAUG_MODEL_CHECKPOINT_HPP_
