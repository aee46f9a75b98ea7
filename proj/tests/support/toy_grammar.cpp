//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "support/toy_grammar.hpp"

#include <set>
#include <string>

#include "rxnaug/smiles/canonical.hpp"
#include "rxnaug/smiles/parse.hpp"
#include "rxnaug/util/rng.hpp"

namespace rxnaug::testing {

namespace {

using rxnaug::reaction::Direction;
using rxnaug::reaction::ReactionRecord;

// Random chain fragment. The first and last characters are always chain
// carbons, so the string concatenates cleanly on either side.
std::string random_fragment(Rng &rng) {
  const int length = 1 + static_cast<int>(uniform_index(rng, 4));
  std::string text = "C";
  for (int i = 1; i < length; ++i) {
    const std::size_t roll = uniform_index(rng, 6);
    if (roll == 0) {
      text += "OC";  // ether link keeps a carbon tail
    } else if (roll == 1 && i + 1 < length) {
      text += "C(C)";
      ++i;
    } else {
      text += "C";
    }
  }
  if (text.back() == ')') {
    text += "C";
  }
  return text;
}

}  // namespace

std::vector<ReactionRecord> make_toy_reactions(std::size_t count,
                                               std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x70C9));
  std::vector<ReactionRecord> records;
  std::set<std::string> seen_products;
  while (records.size() < count) {
    const std::string a = random_fragment(rng);
    const std::string b = random_fragment(rng);
    const bool amide = uniform_index(rng, 2) == 0;

    const std::string product = a + (amide ? "C(=O)N" : "C(=O)O") + b;
    const std::string acid = a + "C(=O)O";
    const std::string partner = (amide ? "N" : "O") + b;

    const auto product_mol = rxnaug::smiles::parse_smiles(product);
    if (!seen_products.insert(rxnaug::smiles::canonicalize(product_mol)).second) {
      continue;
    }
    ReactionRecord record;
    record.direction = Direction::kRetro;
    record.id = "t" + std::to_string(records.size());
    record.class_label = amide ? "amide" : "ester";
    record.products.push_back(product_mol);
    record.reactants.push_back(rxnaug::smiles::parse_smiles(acid));
    record.reactants.push_back(rxnaug::smiles::parse_smiles(partner));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace rxnaug::testing
