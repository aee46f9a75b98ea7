//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/smiles/fragments.hpp"

#include <stdexcept>
#include <string>

#include "rxnaug/smiles/canonical.hpp"

namespace rxnaug::smiles {

std::vector<Molecule> split_fragments(const Molecule &mol) {
  const auto components = mol.components();
  std::vector<int> remap(mol.atoms.size(), -1);
  std::vector<int> component_of(mol.atoms.size(), -1);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (std::size_t i = 0; i < components[c].size(); ++i) {
      remap[components[c][i]] = static_cast<int>(i);
      component_of[components[c][i]] = static_cast<int>(c);
    }
  }
  std::vector<Molecule> fragments(components.size());
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (int atom : components[c]) {
      Atom copy = mol.atoms[atom];
      for (int &entry : copy.chiral_ref) {
        if (entry >= 0) {
          entry = remap[entry];
        }
      }
      fragments[c].atoms.push_back(std::move(copy));
    }
  }
  for (const Bond &bond : mol.bonds) {
    Bond copy = bond;
    copy.a = remap[bond.a];
    copy.b = remap[bond.b];
    fragments[component_of[bond.a]].bonds.push_back(copy);
  }
  return fragments;
}

Molecule largest_fragment(const Molecule &mol) {
  if (mol.atoms.empty()) {
    throw std::invalid_argument("largest_fragment of an empty molecule");
  }
  std::vector<Molecule> fragments = split_fragments(mol);
  int best = 0;
  int best_heavy = fragments[0].heavy_atom_count();
  std::string best_canonical = canonicalize(fragments[0]);
  for (std::size_t i = 1; i < fragments.size(); ++i) {
    const int heavy = fragments[i].heavy_atom_count();
    if (heavy < best_heavy) {
      continue;
    }
    std::string canonical = canonicalize(fragments[i]);
    const bool better =
        heavy > best_heavy ||
        canonical.size() > best_canonical.size() ||
        (canonical.size() == best_canonical.size() &&
         canonical < best_canonical);
    if (better) {
      best = static_cast<int>(i);
      best_heavy = heavy;
      best_canonical = std::move(canonical);
    }
  }
  return fragments[best];
}

}  // namespace rxnaug::smiles
