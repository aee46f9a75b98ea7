//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/smiles/molecule.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace rxnaug::smiles {

namespace {

constexpr std::array<std::string_view, 10> kOrganicSubset = {
    "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"};
constexpr std::array<std::string_view, 6> kAromaticOrganic = {"B", "C", "N",
                                                              "O", "P", "S"};

}  // namespace

bool Atom::needs_bracket() const {
  if (explicit_h.has_value() || isotope.has_value() || charge != 0 ||
      chirality != Chirality::kNone) {
    return true;
  }
  if (aromatic) {
    return std::find(kAromaticOrganic.begin(), kAromaticOrganic.end(),
                     element) == kAromaticOrganic.end();
  }
  return std::find(kOrganicSubset.begin(), kOrganicSubset.end(), element) ==
         kOrganicSubset.end();
}

std::vector<std::vector<Neighbor>> Molecule::incidence() const {
  std::vector<std::vector<Neighbor>> inc(atoms.size());
  for (int i = 0; i < static_cast<int>(bonds.size()); ++i) {
    const Bond &bond = bonds[i];
    inc[bond.a].push_back({bond.b, i});
    inc[bond.b].push_back({bond.a, i});
  }
  return inc;
}

std::vector<std::vector<int>> Molecule::components() const {
  const auto inc = incidence();
  std::vector<int> comp(atoms.size(), -1);
  std::vector<std::vector<int>> result;
  for (int start = 0; start < static_cast<int>(atoms.size()); ++start) {
    if (comp[start] >= 0) {
      continue;
    }
    const int id = static_cast<int>(result.size());
    std::vector<int> members;
    std::vector<int> stack = {start};
    comp[start] = id;
    while (!stack.empty()) {
      const int atom = stack.back();
      stack.pop_back();
      members.push_back(atom);
      for (const Neighbor &nb : inc[atom]) {
        if (comp[nb.atom] < 0) {
          comp[nb.atom] = id;
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(members.begin(), members.end());
    result.push_back(std::move(members));
  }
  return result;
}

int Molecule::heavy_atom_count() const {
  int count = 0;
  for (const Atom &atom : atoms) {
    if (atom.element != "H") {
      ++count;
    }
  }
  return count;
}

std::vector<bool> Molecule::ring_membership() const {
  // Bridge detection: non-bridge edges are exactly the cycle edges.
  const auto inc = incidence();
  const int n = static_cast<int>(atoms.size());
  std::vector<int> entry(n, -1);
  std::vector<int> low(n, 0);
  std::vector<bool> edge_in_ring(bonds.size(), false);
  int timer = 0;

  // Iterative DFS; (atom, parent bond, next incidence slot).
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t slot;
  };
  for (int root = 0; root < n; ++root) {
    if (entry[root] >= 0) {
      continue;
    }
    std::vector<Frame> stack = {{root, -1, 0}};
    entry[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame &frame = stack.back();
      if (frame.slot < inc[frame.atom].size()) {
        const Neighbor nb = inc[frame.atom][frame.slot++];
        if (nb.bond == frame.parent_bond) {
          continue;
        }
        if (entry[nb.atom] >= 0) {
          low[frame.atom] = std::min(low[frame.atom], entry[nb.atom]);
          edge_in_ring[nb.bond] = true;  // back edge
        } else {
          entry[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        }
      } else {
        const Frame done = frame;
        stack.pop_back();
        if (!stack.empty()) {
          Frame &parent = stack.back();
          low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
          if (low[done.atom] <= entry[parent.atom]) {
            edge_in_ring[done.parent_bond] = true;
          }
        }
      }
    }
  }

  std::vector<bool> in_ring(n, false);
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    if (edge_in_ring[i]) {
      in_ring[bonds[i].a] = true;
      in_ring[bonds[i].b] = true;
    }
  }
  return in_ring;
}

BondDirection flipped(BondDirection dir) {
  switch (dir) {
    case BondDirection::kUp:
      return BondDirection::kDown;
    case BondDirection::kDown:
      return BondDirection::kUp;
    default:
      return BondDirection::kNone;
  }
}

}  // namespace rxnaug::smiles
