//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/reaction/filter.hpp"

#include <algorithm>
#include <unordered_set>

#include "rxnaug/smiles/canonical.hpp"

namespace rxnaug::reaction {

namespace {

std::string sorted_role_key(const std::vector<smiles::Molecule> &role) {
  std::vector<std::string> forms;
  forms.reserve(role.size());
  for (const auto &mol : role) {
    forms.push_back(smiles::canonicalize(mol));
  }
  std::sort(forms.begin(), forms.end());
  std::string key;
  for (const auto &form : forms) {
    key += form;
    key += '.';
  }
  return key;
}

std::string dedup_key(const ReactionRecord &record) {
  return (record.direction == Direction::kForward ? "F|" : "R|") +
         sorted_role_key(record.reactants) + ">" +
         sorted_role_key(record.reagents) + ">" +
         sorted_role_key(record.products);
}

int reactant_heavy_atoms(const ReactionRecord &record) {
  int total = 0;
  for (const auto &mol : record.reactants) {
    total += mol.heavy_atom_count();
  }
  return total;
}

// Canonical length of the largest product fragment.
std::size_t largest_product_chars(const ReactionRecord &record) {
  std::size_t best_len = 0;
  int best_heavy = -1;
  for (const auto &mol : record.products) {
    const int heavy = mol.heavy_atom_count();
    const std::string canonical = smiles::canonicalize(mol);
    if (heavy > best_heavy ||
        (heavy == best_heavy && canonical.size() > best_len)) {
      best_heavy = heavy;
      best_len = canonical.size();
    }
  }
  return best_len;
}

}  // namespace

FilterResult filter_dataset(std::vector<ReactionRecord> records,
                            const FilterRules &rules) {
  FilterResult result;
  std::unordered_set<std::string> seen;
  for (auto &record : records) {
    if (rules.drop_empty_products && record.products.empty()) {
      result.rejected.push_back({record.id, "empty_products", ""});
      continue;
    }
    if (rules.min_reactant_atoms > 0) {
      const int atoms = reactant_heavy_atoms(record);
      if (atoms < rules.min_reactant_atoms) {
        result.rejected.push_back(
            {record.id, "min_reactant_atoms",
             record.reactants.empty()
                 ? "no reactants"
                 : std::to_string(atoms) + " < " +
                       std::to_string(rules.min_reactant_atoms)});
        continue;
      }
    }
    if (rules.min_product_chars > 0 && !record.products.empty()) {
      const std::size_t chars = largest_product_chars(record);
      if (chars < static_cast<std::size_t>(rules.min_product_chars)) {
        result.rejected.push_back(
            {record.id, "min_product_chars",
             std::to_string(chars) + " < " +
                 std::to_string(rules.min_product_chars)});
        continue;
      }
    }
    if (rules.deduplicate && !seen.insert(dedup_key(record)).second) {
      result.rejected.push_back({record.id, "duplicate", ""});
      continue;
    }
    result.kept.push_back(std::move(record));
  }
  return result;
}

}  // namespace rxnaug::reaction
