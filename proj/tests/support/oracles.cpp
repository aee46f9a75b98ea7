//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "support/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "rxnaug/smiles/write.hpp"

namespace rxnaug::testing {

namespace {

using smiles::Bond;
using smiles::BondOrder;
using smiles::Molecule;
using smiles::Neighbor;
using smiles::WritePlan;

std::string atom_label(const smiles::Atom &atom) {
  return atom.element + (atom.aromatic ? "~" : "") + "|" +
         std::to_string(atom.charge) + "|" +
         std::to_string(atom.explicit_h.value_or(-1)) + "|" +
         std::to_string(atom.isotope.value_or(0));
}

std::optional<BondOrder> bond_between(const Molecule &mol, int a, int b) {
  for (const Bond &bond : mol.bonds) {
    if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
      return bond.order;
    }
  }
  return std::nullopt;
}

bool permutation_preserves(const Molecule &a, const Molecule &b,
                           const std::vector<int> &perm) {
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    if (atom_label(a.atoms[i]) != atom_label(b.atoms[perm[i]])) {
      return false;
    }
  }
  for (const Bond &bond : a.bonds) {
    if (bond_between(b, perm[bond.a], perm[bond.b]) != bond.order) {
      return false;
    }
  }
  return a.bonds.size() == b.bonds.size();
}

}  // namespace

bool isomorphic(const Molecule &a, const Molecule &b) {
  if (a.atoms.size() != b.atoms.size() || a.bonds.size() != b.bonds.size()) {
    return false;
  }
  std::vector<int> perm(a.atoms.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permutation_preserves(a, b, perm)) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::set<std::string> all_dfs_outputs(const Molecule &mol) {
  const auto inc = mol.incidence();
  const auto components = mol.components();

  // Enumerate neighbor-order permutations atom by atom.
  std::set<std::string> outputs;
  std::vector<std::vector<Neighbor>> order = inc;
  for (auto &list : order) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor &x, const Neighbor &y) { return x.bond < y.bond; });
  }

  std::vector<std::size_t> root_choice(components.size(), 0);
  auto emit_all_orderings = [&](auto &&self, std::size_t atom) -> void {
    if (atom == order.size()) {
      WritePlan plan;
      for (std::size_t c = 0; c < components.size(); ++c) {
        plan.roots.push_back(components[c][root_choice[c]]);
      }
      plan.neighbor_order = order;
      outputs.insert(write_smiles(mol, plan));
      return;
    }
    std::sort(order[atom].begin(), order[atom].end(),
              [](const Neighbor &x, const Neighbor &y) { return x.bond < y.bond; });
    do {
      self(self, atom + 1);
    } while (std::next_permutation(
        order[atom].begin(), order[atom].end(),
        [](const Neighbor &x, const Neighbor &y) { return x.bond < y.bond; }));
  };

  auto roots_rec = [&](auto &&self, std::size_t component) -> void {
    if (component == components.size()) {
      emit_all_orderings(emit_all_orderings, 0);
      return;
    }
    for (std::size_t i = 0; i < components[component].size(); ++i) {
      root_choice[component] = i;
      self(self, component + 1);
    }
  };
  roots_rec(roots_rec, 0);
  return outputs;
}

std::vector<int> automorphism_orbits(const Molecule &mol) {
  const int n = static_cast<int>(mol.atoms.size());
  std::vector<int> orbit(n);
  std::iota(orbit.begin(), orbit.end(), 0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto merge = [&](int a, int b) {
    const int from = std::max(orbit[a], orbit[b]);
    const int to = std::min(orbit[a], orbit[b]);
    for (int &o : orbit) {
      if (o == from) {
        o = to;
      }
    }
  };
  do {
    if (permutation_preserves(mol, mol, perm)) {
      for (int i = 0; i < n; ++i) {
        if (perm[i] != i) {
          merge(i, perm[i]);
        }
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return orbit;
}

}  // namespace rxnaug::testing
