//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_MODEL_DECODE_HPP_
#define RXNAUG_MODEL_DECODE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "rxnaug/model/transformer.hpp"
#include "rxnaug/model/vocab.hpp"

namespace rxnaug::model {

// Incremental next-token distribution provider. The transformer implements
// it with a per-hypothesis key/value cache; tests drive the search with
// hand-built transition tables through the same interface.
class BeamScorer {
 public:
  struct State {
    virtual ~State() = default;
    virtual std::unique_ptr<State> clone() const = 0;
  };

  virtual ~BeamScorer() = default;
  virtual int vocab_size() const = 0;
  virtual int end_token() const = 0;
  // Tokens never proposed as outputs (pad, begin for the transformer).
  virtual std::vector<int> forbidden_tokens() const { return {}; }
  // State positioned after the begin-of-sequence marker.
  virtual std::unique_ptr<State> initial_state() = 0;
  // Log-probabilities of the next token given the state.
  virtual Eigen::VectorXd next_logprobs(State &state) = 0;
  virtual void advance(State &state, int token) = 0;
};

struct DecodedSequence {
  std::vector<int> tokens;  // excludes begin/end markers
  double score = 0.0;       // sum of chosen log-probabilities
};

// Argmax decoding; identical to beam_decode with beam = 1.
DecodedSequence greedy_decode(BeamScorer &scorer, const DecodeConfig &config);

// Standard beam search over cumulative log-probability. Finished hypotheses
// freeze and compete without length normalization. Results are unique
// sequences in non-increasing score order, at most config.beam of them.
// Throws DataError when config.beam exceeds the scorer's vocabulary size.
std::vector<DecodedSequence> beam_decode(BeamScorer &scorer,
                                         const DecodeConfig &config);

// Transformer-backed scorer for one source sequence. Encoder output and
// per-layer cross-attention projections are computed once; decoder steps run
// incrementally with cached self-attention keys/values.
class TransformerScorer : public BeamScorer {
 public:
  TransformerScorer(const TransformerParams &params, const ModelConfig &config,
                    const Vocabulary &vocab, std::span<const int> source,
                    double temperature);
  ~TransformerScorer() override;

  int vocab_size() const override;
  int end_token() const override { return Vocabulary::kEnd; }
  std::vector<int> forbidden_tokens() const override {
    return {Vocabulary::kPad, Vocabulary::kBegin};
  }
  std::unique_ptr<State> initial_state() override;
  Eigen::VectorXd next_logprobs(State &state) override;
  void advance(State &state, int token) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rxnaug::model

#endif  // RXNAUG_MODEL_DECODE_HPP_
