//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_MODEL_CONFIG_HPP_
#define RXNAUG_MODEL_CONFIG_HPP_

#include "rxnaug/util/io.hpp"

namespace rxnaug::model {

// Desk-scale defaults; the 6-layer 8-head reference configuration remains
// expressible through the same fields.
struct ModelConfig {
  int layers = 2;
  int heads = 4;
  int model_width = 64;
  int ffn_width = 256;
  double dropout = 0.1;
  int max_seq_len = 256;

  void validate() const {
    if (layers < 1 || heads < 1 || model_width < 1 || ffn_width < 1 ||
        max_seq_len < 1) {
      throw DataError("model dimensions must be positive");
    }
    if (model_width % heads != 0) {
      throw DataError("model width must be divisible by the head count");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
      throw DataError("dropout must lie in [0, 1)");
    }
  }
};

struct DecodeConfig {
  int beam = 5;
  double temperature = 1.0;
  int max_output_length = 256;

  void validate(int vocab_size) const {
    if (beam < 1) {
      throw DataError("beam size must be positive");
    }
    if (beam > vocab_size) {
      throw DataError("beam size " + std::to_string(beam) +
                      " exceeds the vocabulary size " +
                      std::to_string(vocab_size));
    }
    if (temperature <= 0.0) {
      throw DataError("temperature must be positive");
    }
    if (max_output_length < 1) {
      throw DataError("max output length must be positive");
    }
  }
};

}  // namespace rxnaug::model

#endif  // RXNAUG_MODEL_CONFIG_HPP_
