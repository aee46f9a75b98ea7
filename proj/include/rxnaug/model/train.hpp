//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_MODEL_TRAIN_HPP_
#define RXNAUG_MODEL_TRAIN_HPP_

#include <cstdint>
#include <vector>

#include "rxnaug/model/checkpoint.hpp"
#include "rxnaug/model/transformer.hpp"
#include "rxnaug/model/vocab.hpp"
#include "rxnaug/reaction/augment.hpp"

namespace rxnaug::model {

struct TrainConfig {
  int epochs = 100;
  int batch_chars = 3000;
  double lr_scale = 1.0;
  int warmup_steps = 400;
  std::uint64_t seed = 0;
  // Training-set subsample used for the per-epoch exact-match evaluation;
  // 0 evaluates the whole set.
  int eval_sample = 512;
  int keep_checkpoints = 5;
  bool verbose = false;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;  // mean cross-entropy per predicted character
  double char_accuracy = 0.0;
  double exact_accuracy = 0.0;
};

struct TrainResult {
  // Best checkpoints by train exact-match, ties to the later epoch.
  std::vector<Checkpoint> best;
  std::vector<EpochStats> log;
};

// Greedy batching in pass order: consecutive pairs are grouped while their
// combined character count stays within batch_chars (every batch holds at
// least one pair).
std::vector<std::vector<std::size_t>> batch_indices(
    const std::vector<std::size_t> &char_counts, int batch_chars);

// Character-level teacher-forced training with an Adam optimizer and a
// warmup-then-inverse-square-root learning-rate schedule. Deterministic in
// (seed, inputs): shuffling, dropout, and evaluation sampling all derive
// from TrainConfig::seed. Throws NumericError on a non-finite loss.
TrainResult train_model(TransformerParams &params, const ModelConfig &config,
                        const Vocabulary &vocab,
                        const std::vector<reaction::AugmentedPair> &pairs,
                        const TrainConfig &train_config);

// Greedy-decode evaluation over a deterministic subsample (0 = all pairs).
// Returns the exact-sequence match fraction; char_accuracy (optional out)
// receives the mean positional character accuracy.
double evaluate_exact_match(const TransformerParams &params,
                            const ModelConfig &config, const Vocabulary &vocab,
                            const std::vector<reaction::AugmentedPair> &pairs,
                            int sample, std::uint64_t seed,
                            double *char_accuracy = nullptr);

}  // namespace rxnaug::model

#endif  // RXNAUG_MODEL_TRAIN_HPP_
