//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/model/vocab.hpp"

#include <algorithm>
#include <set>

#include "rxnaug/util/io.hpp"

namespace rxnaug::model {

Vocabulary Vocabulary::build(std::span<const std::string> texts) {
  if (texts.empty()) {
    throw DataError("cannot build a vocabulary from an empty dataset");
  }
  std::set<char> inventory;
  for (const std::string &text : texts) {
    inventory.insert(text.begin(), text.end());
  }
  Vocabulary vocab;
  vocab.chars_.assign(inventory.begin(), inventory.end());
  vocab.rebuild_lookup();
  return vocab;
}

Vocabulary Vocabulary::from_chars(const std::string &chars) {
  Vocabulary vocab;
  vocab.chars_ = chars;
  std::sort(vocab.chars_.begin(), vocab.chars_.end());
  vocab.chars_.erase(std::unique(vocab.chars_.begin(), vocab.chars_.end()),
                     vocab.chars_.end());
  vocab.rebuild_lookup();
  return vocab;
}

void Vocabulary::rebuild_lookup() {
  lookup_.assign(256, -1);
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    lookup_[static_cast<unsigned char>(chars_[i])] = static_cast<int>(i) + 3;
  }
}

int Vocabulary::token_of(char c, const std::string &context) const {
  const int token = lookup_[static_cast<unsigned char>(c)];
  if (token < 0) {
    throw DataError("character '" + std::string(1, c) +
                    "' outside the vocabulary" +
                    (context.empty() ? "" : " in " + context));
  }
  return token;
}

std::vector<int> Vocabulary::encode(const std::string &text,
                                    const std::string &context) const {
  std::vector<int> tokens;
  tokens.reserve(text.size());
  for (char c : text) {
    tokens.push_back(token_of(c, context));
  }
  return tokens;
}

std::string Vocabulary::decode(std::span<const int> tokens) const {
  std::string text;
  text.reserve(tokens.size());
  for (int token : tokens) {
    if (token >= 3 && token < size()) {
      text += chars_[static_cast<std::size_t>(token - 3)];
    }
  }
  return text;
}

}  // namespace rxnaug::model
