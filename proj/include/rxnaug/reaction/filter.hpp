//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_REACTION_FILTER_HPP_
#define RXNAUG_REACTION_FILTER_HPP_

#include <string>
#include <vector>

#include "rxnaug/reaction/reaction.hpp"

namespace rxnaug::reaction {

struct FilterRules {
  int min_reactant_atoms = 5;
  int min_product_chars = 5;
  bool drop_empty_products = true;
  bool deduplicate = true;
};

struct Rejection {
  std::string id;
  std::string rule;
  std::string detail;
};

struct FilterResult {
  std::vector<ReactionRecord> kept;
  std::vector<Rejection> rejected;
};

// Rejections are data, not errors: every dropped record lands in the log
// with the first rule it violated. Duplicate detection keys on the canonical
// serialized reaction with fragments sorted within each role.
FilterResult filter_dataset(std::vector<ReactionRecord> records,
                            const FilterRules &rules);

}  // namespace rxnaug::reaction

#endif  // RXNAUG_REACTION_FILTER_HPP_
