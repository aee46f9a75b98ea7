//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_MODEL_TRANSFORMER_HPP_
#define RXNAUG_MODEL_TRANSFORMER_HPP_

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rxnaug/model/config.hpp"
#include "rxnaug/util/rng.hpp"

namespace rxnaug::model {

using Mat = Eigen::MatrixXd;

// Parameter leaves. Biases and layer-norm parameters are 1 x n matrices so
// every tensor shares one type.
struct LinearP {
  Mat w;  // in x out
  Mat b;  // 1 x out
};

struct LayerNormP {
  Mat gamma;  // 1 x d
  Mat beta;   // 1 x d
};

struct AttentionP {
  LinearP q, k, v, o;
};

struct EncoderLayerP {
  LayerNormP ln1;
  AttentionP attn;
  LayerNormP ln2;
  LinearP ff1, ff2;
};

struct DecoderLayerP {
  LayerNormP ln1;
  AttentionP self;
  LayerNormP ln2;
  AttentionP cross;
  LayerNormP ln3;
  LinearP ff1, ff2;
};

// Pre-norm encoder-decoder transformer over a shared character embedding.
struct TransformerParams {
  Mat embedding;  // vocab x d, shared by encoder and decoder inputs
  std::vector<EncoderLayerP> encoder;
  std::vector<DecoderLayerP> decoder;
  LayerNormP encoder_norm;
  LayerNormP decoder_norm;
  LinearP output;  // d x vocab

  int vocab_size() const { return static_cast<int>(embedding.rows()); }

  // Allocates every tensor with the given shapes, zero-filled.
  static TransformerParams zeros_like(const ModelConfig &config, int vocab);
  // Gaussian fan-based initialization, deterministic in the rng state.
  static TransformerParams init(const ModelConfig &config, int vocab, Rng &rng);
};

// Visits every parameter tensor with a stable dotted name, in a fixed order.
void visit_tensors(TransformerParams &params,
                   const std::function<void(const std::string &, Mat &)> &fn);
void visit_tensors(const TransformerParams &params,
                   const std::function<void(const std::string &, const Mat &)> &fn);

// Per-layer attention weights captured during an evaluation forward pass.
struct AttentionProbe {
  // Each entry: one head's softmax matrix (rows sum to 1).
  std::vector<Mat> weights;
};

// Evaluation-mode encoder output (one row per source position), as consumed
// by the decoder's cross-attention.
Mat encode_source(const TransformerParams &params, const ModelConfig &config,
                  std::span<const int> source,
                  const std::vector<bool> *source_attend = nullptr);

// Evaluation-mode forward pass. Returns one log-probability row per
// next-token slot: row t is the distribution after consuming
// target_prefix[0..t-1] (so row 0 conditions on <begin> alone and the result
// has target_prefix.size() + 1 rows). Source positions may be masked
// explicitly via source_attend; by default pad tokens are masked. Throws
// DataError on out-of-range tokens or over-long sequences.
Mat forward_logprobs(const TransformerParams &params, const ModelConfig &config,
                     std::span<const int> source,
                     std::span<const int> target_prefix,
                     const std::vector<bool> *source_attend = nullptr,
                     AttentionProbe *probe = nullptr);

// Training-mode pass over one (source, target) pair with teacher forcing:
// accumulates parameter gradients of the summed next-character cross-entropy
// into `grads` (scaled by 1 / loss_normalizer) and returns the summed loss.
// The target sequence contributes target.size() + 1 prediction slots (the
// end token closes the sequence). dropout_rng enables inverted dropout when
// non-null and config.dropout > 0.
double sequence_loss_grad(const TransformerParams &params,
                          const ModelConfig &config, std::span<const int> source,
                          std::span<const int> target, TransformerParams &grads,
                          double loss_normalizer, Rng *dropout_rng = nullptr);

}  // namespace rxnaug::model

#endif  // RXNAUG_MODEL_TRANSFORMER_HPP_
