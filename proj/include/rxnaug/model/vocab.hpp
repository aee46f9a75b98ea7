//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_MODEL_VOCAB_HPP_
#define RXNAUG_MODEL_VOCAB_HPP_

#include <span>
#include <string>
#include <vector>

namespace rxnaug::model {

// Character inventory of a dataset plus the three specials. Indices are
// stable: specials first, then characters in ascending byte order. The
// vocabulary size bounds the maximum usable beam.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBegin = 1;
  static constexpr int kEnd = 2;

  Vocabulary() = default;

  // Deterministic inventory over all strings. Throws DataError when the
  // dataset is empty.
  static Vocabulary build(std::span<const std::string> texts);
  static Vocabulary from_chars(const std::string &chars);

  int size() const { return static_cast<int>(chars_.size()) + 3; }
  const std::string &chars() const { return chars_; }

  // Throws DataError naming the character and context on unknown input.
  int token_of(char c, const std::string &context = {}) const;
  std::vector<int> encode(const std::string &text,
                          const std::string &context = {}) const;
  // Inverse of encode; special tokens are skipped.
  std::string decode(std::span<const int> tokens) const;

  bool operator==(const Vocabulary &other) const {
    return chars_ == other.chars_;
  }

 private:
  std::string chars_;
  std::vector<int> lookup_;  // byte -> token id or -1
  void rebuild_lookup();
};

}  // namespace rxnaug::model

#endif  // RXNAUG_MODEL_VOCAB_HPP_
