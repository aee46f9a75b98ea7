//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rxnaug/model/decode.hpp"
#include "rxnaug/score/metrics.hpp"
#include "rxnaug/util/io.hpp"

namespace rxnaug::model {

namespace {

struct AdamState {
  TransformerParams m;
  TransformerParams v;
  long step = 0;
};

void adam_step(TransformerParams &params, TransformerParams &grads,
               AdamState &state, double lr) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.98;
  constexpr double kEps = 1e-9;
  state.step += 1;
  const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));

  std::vector<Mat *> tensors, gradients, ms, vs;
  visit_tensors(params, [&](const std::string &, Mat &t) { tensors.push_back(&t); });
  visit_tensors(grads, [&](const std::string &, Mat &t) { gradients.push_back(&t); });
  visit_tensors(state.m, [&](const std::string &, Mat &t) { ms.push_back(&t); });
  visit_tensors(state.v, [&](const std::string &, Mat &t) { vs.push_back(&t); });

  for (std::size_t i = 0; i < tensors.size(); ++i) {
    Mat &g = *gradients[i];
    Mat &m = *ms[i];
    Mat &v = *vs[i];
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v.array().matrix() +
        (1.0 - kBeta2) * g.array().square().matrix();
    tensors[i]->array() -=
        lr * (m.array() / bias1) / ((v.array() / bias2).sqrt() + kEps);
    g.setZero();
  }
}

double schedule_lr(const TrainConfig &cfg, int model_width, long step) {
  const double s = static_cast<double>(step);
  const double warmup = static_cast<double>(std::max(cfg.warmup_steps, 1));
  return cfg.lr_scale / std::sqrt(static_cast<double>(model_width)) *
         std::min(1.0 / std::sqrt(s), s / (warmup * std::sqrt(warmup)));
}

std::vector<std::size_t> eval_indices(std::size_t total, int sample,
                                      std::uint64_t seed) {
  std::vector<std::size_t> indices(total);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  if (sample <= 0 || static_cast<std::size_t>(sample) >= total) {
    return indices;
  }
  Rng rng(derive_seed(seed, 0xE7A1));
  shuffle_inplace(rng, indices);
  indices.resize(static_cast<std::size_t>(sample));
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace

std::vector<std::vector<std::size_t>> batch_indices(
    const std::vector<std::size_t> &char_counts, int batch_chars) {
  std::vector<std::vector<std::size_t>> batches;
  std::vector<std::size_t> current;
  std::size_t used = 0;
  for (std::size_t i = 0; i < char_counts.size(); ++i) {
    if (!current.empty() &&
        used + char_counts[i] > static_cast<std::size_t>(batch_chars)) {
      batches.push_back(std::move(current));
      current = {};
      used = 0;
    }
    current.push_back(i);
    used += char_counts[i];
  }
  if (!current.empty()) {
    batches.push_back(std::move(current));
  }
  return batches;
}

double evaluate_exact_match(const TransformerParams &params,
                            const ModelConfig &config, const Vocabulary &vocab,
                            const std::vector<reaction::AugmentedPair> &pairs,
                            int sample, std::uint64_t seed,
                            double *char_accuracy) {
  if (pairs.empty()) {
    throw DataError("cannot evaluate on an empty pair list");
  }
  const auto indices = eval_indices(pairs.size(), sample, seed);
  std::size_t exact = 0;
  double char_sum = 0.0;
  for (std::size_t index : indices) {
    const auto &pair = pairs[index];
    const std::vector<int> source = vocab.encode(pair.source);
    TransformerScorer scorer(params, config, vocab, source, 1.0);
    DecodeConfig decode;
    decode.beam = 1;
    // Enough room to decode the gold target plus a margin; longer outputs
    // cannot be exact matches anyway.
    decode.max_output_length = std::min<int>(
        config.max_seq_len - 1, static_cast<int>(pair.target.size()) + 8);
    const DecodedSequence decoded = greedy_decode(scorer, decode);
    const std::string text = vocab.decode(decoded.tokens);
    exact += text == pair.target ? 1 : 0;
    char_sum += score::character_accuracy(text, pair.target);
  }
  if (char_accuracy != nullptr) {
    *char_accuracy = char_sum / static_cast<double>(indices.size());
  }
  return static_cast<double>(exact) / static_cast<double>(indices.size());
}

TrainResult train_model(TransformerParams &params, const ModelConfig &config,
                        const Vocabulary &vocab,
                        const std::vector<reaction::AugmentedPair> &pairs,
                        const TrainConfig &train_config) {
  config.validate();
  if (pairs.empty()) {
    throw DataError("cannot train on an empty pair list");
  }
  if (train_config.epochs < 1) {
    throw DataError("training requires epochs >= 1");
  }

  // Tokenize once up front.
  std::vector<std::vector<int>> sources, targets;
  sources.reserve(pairs.size());
  targets.reserve(pairs.size());
  for (const auto &pair : pairs) {
    sources.push_back(vocab.encode(pair.source, "pair " + pair.reaction_id));
    targets.push_back(vocab.encode(pair.target, "pair " + pair.reaction_id));
    if (static_cast<int>(sources.back().size()) > config.max_seq_len ||
        static_cast<int>(targets.back().size()) > config.max_seq_len - 1) {
      throw DataError("pair " + pair.reaction_id + " exceeds max_seq_len");
    }
  }

  TransformerParams grads =
      TransformerParams::zeros_like(config, vocab.size());
  AdamState adam{TransformerParams::zeros_like(config, vocab.size()),
                 TransformerParams::zeros_like(config, vocab.size()), 0};
  Rng dropout_rng(derive_seed(train_config.seed, 0xD407));

  struct RankedCheckpoint {
    double accuracy;
    int epoch;
    Checkpoint snapshot;
  };
  std::vector<RankedCheckpoint> best;
  TrainResult result;

  for (int epoch = 1; epoch <= train_config.epochs; ++epoch) {
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(train_config.seed, 1000 + epoch));
    shuffle_inplace(shuffle_rng, order);

    std::vector<std::size_t> chars(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      chars[i] = sources[order[i]].size() + targets[order[i]].size();
    }
    const auto batches = batch_indices(chars, train_config.batch_chars);

    double loss_sum = 0.0;
    std::size_t token_sum = 0;
    std::size_t batch_no = 0;
    for (const auto &batch : batches) {
      ++batch_no;
      std::size_t batch_tokens = 0;
      for (std::size_t slot : batch) {
        batch_tokens += targets[order[slot]].size() + 1;
      }
      double batch_loss = 0.0;
      for (std::size_t slot : batch) {
        const std::size_t index = order[slot];
        batch_loss += sequence_loss_grad(
            params, config, sources[index], targets[index], grads,
            static_cast<double>(batch_tokens),
            config.dropout > 0.0 ? &dropout_rng : nullptr);
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_no));
      }
      loss_sum += batch_loss;
      token_sum += batch_tokens;
      adam_step(params, grads, adam,
                schedule_lr(train_config, config.model_width, adam.step + 1));
    }

    double char_acc = 0.0;
    const double exact_acc =
        evaluate_exact_match(params, config, vocab, pairs,
                             train_config.eval_sample, train_config.seed,
                             &char_acc);
    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = loss_sum / static_cast<double>(token_sum);
    stats.char_accuracy = char_acc;
    stats.exact_accuracy = exact_acc;
    result.log.push_back(stats);
    if (train_config.verbose) {
      std::fprintf(stderr,
                   "epoch %4d  loss %.4f  char %.4f  exact %.4f\n", epoch,
                   stats.loss, stats.char_accuracy, stats.exact_accuracy);
    }

    best.push_back({exact_acc, epoch,
                    Checkpoint::snapshot(params, config, vocab, epoch,
                                         exact_acc)});
    std::sort(best.begin(), best.end(),
              [](const RankedCheckpoint &x, const RankedCheckpoint &y) {
                if (x.accuracy != y.accuracy) {
                  return x.accuracy > y.accuracy;
                }
                return x.epoch > y.epoch;
              });
    if (best.size() > static_cast<std::size_t>(train_config.keep_checkpoints)) {
      best.resize(static_cast<std::size_t>(train_config.keep_checkpoints));
    }
  }

  for (RankedCheckpoint &entry : best) {
    result.best.push_back(std::move(entry.snapshot));
  }
  return result;
}

}  // namespace rxnaug::model
