//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/smiles/canonical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "rxnaug/smiles/fragments.hpp"
#include "rxnaug/smiles/write.hpp"

namespace rxnaug::smiles {

namespace {

// Densifies arbitrary sortable keys into ranks 0..k-1 over `members`.
template <typename Key>
int assign_ranks(const std::vector<int> &members, const std::vector<Key> &keys,
                 std::vector<int> &ranks) {
  std::vector<int> order = members;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
  });
  int rank = -1;
  const Key *last = nullptr;
  for (int atom : order) {
    if (last == nullptr || keys[atom] != *last) {
      ++rank;
      last = &keys[atom];
    }
    ranks[atom] = rank;
  }
  return rank + 1;
}

// Refine `ranks` over one fragment until the partition stops splitting.
void refine(const Molecule &mol, const std::vector<std::vector<Neighbor>> &inc,
            const std::vector<int> &members, std::vector<int> &ranks,
            int &classes) {
  using Key = std::pair<int, std::vector<int>>;
  std::vector<Key> keys(mol.atoms.size());
  for (;;) {
    for (int atom : members) {
      std::vector<int> nb_ranks;
      nb_ranks.reserve(inc[atom].size());
      for (const Neighbor &nb : inc[atom]) {
        // Neighbor rank paired with the bond order, so e.g. the two oxygens
        // of a carboxyl separate.
        nb_ranks.push_back(ranks[nb.atom] * 4 +
                           static_cast<int>(mol.bonds[nb.bond].order));
      }
      std::sort(nb_ranks.begin(), nb_ranks.end());
      keys[atom] = {ranks[atom], std::move(nb_ranks)};
    }
    const int next = assign_ranks(members, keys, ranks);
    if (next == classes) {
      return;
    }
    classes = next;
  }
}

// Traversal-independent tetrahedral descriptor: the stored parity re-expressed
// relative to the rank-sorted neighbor order. 0 = achiral, 1/2 = the two
// orientations, 3 = undecidable (tied neighbor ranks).
int stereo_code(const Atom &atom, const std::vector<int> &ranks) {
  if (atom.chirality == Chirality::kNone || atom.chiral_ref.empty()) {
    return 0;
  }
  auto rank_of = [&](int entry) {
    return entry == kImplicitHNeighbor ? -1 : ranks[entry];
  };
  std::vector<int> sorted = atom.chiral_ref;
  std::sort(sorted.begin(), sorted.end(),
            [&](int a, int b) { return rank_of(a) < rank_of(b); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (rank_of(sorted[i - 1]) == rank_of(sorted[i])) {
      return 3;
    }
  }
  int inversions = 0;
  for (std::size_t i = 0; i < atom.chiral_ref.size(); ++i) {
    for (std::size_t j = i + 1; j < atom.chiral_ref.size(); ++j) {
      if (rank_of(atom.chiral_ref[i]) > rank_of(atom.chiral_ref[j])) {
        ++inversions;
      }
    }
  }
  const bool clockwise =
      (atom.chirality == Chirality::kClockwise) == (inversions % 2 == 0);
  return clockwise ? 1 : 2;
}

void rank_fragment(const Molecule &mol,
                   const std::vector<std::vector<Neighbor>> &inc,
                   const std::vector<bool> &in_ring,
                   const std::vector<int> &members, std::vector<int> &ranks) {
  using InitKey = std::tuple<std::string, bool, std::size_t, int, int, bool, int>;
  std::vector<InitKey> init(mol.atoms.size());
  for (int atom : members) {
    const Atom &a = mol.atoms[atom];
    init[atom] = {a.element,
                  a.aromatic,
                  inc[atom].size(),
                  a.charge,
                  a.explicit_h.value_or(0),
                  in_ring[atom],
                  a.isotope.value_or(0)};
  }
  int classes = assign_ranks(members, init, ranks);
  refine(mol, inc, members, ranks, classes);

  // Stereo rounds until stable: parity-distinct atoms stop tying, and
  // branches that differ only in internal stereo separate transitively.
  while (classes < static_cast<int>(members.size())) {
    std::vector<std::pair<int, int>> keys(mol.atoms.size());
    for (int atom : members) {
      keys[atom] = {ranks[atom], stereo_code(mol.atoms[atom], ranks)};
    }
    const int next = assign_ranks(members, keys, ranks);
    if (next == classes) {
      break;
    }
    classes = next;
    refine(mol, inc, members, ranks, classes);
  }

  // Symmetry breaking: single out the lowest-index atom of the smallest
  // still-tied rank, then re-refine, until the partition is discrete.
  while (classes < static_cast<int>(members.size())) {
    int tied_rank = -1;
    int chosen = -1;
    std::map<int, std::vector<int>> by_rank;
    for (int atom : members) {
      by_rank[ranks[atom]].push_back(atom);
    }
    for (const auto &[rank, atoms] : by_rank) {
      if (atoms.size() > 1) {
        tied_rank = rank;
        chosen = *std::min_element(atoms.begin(), atoms.end());
        break;
      }
    }
    std::vector<std::pair<int, int>> keys(mol.atoms.size());
    for (int atom : members) {
      const int tag = (ranks[atom] == tied_rank && atom != chosen) ? 1 : 0;
      keys[atom] = {ranks[atom], tag};
    }
    classes = assign_ranks(members, keys, ranks);
    refine(mol, inc, members, ranks, classes);
  }
}

WritePlan plan_from_ranks(const Molecule &mol, const std::vector<int> &ranks) {
  const auto inc = mol.incidence();
  WritePlan plan;
  plan.neighbor_order.resize(mol.atoms.size());
  for (std::size_t atom = 0; atom < mol.atoms.size(); ++atom) {
    auto order = inc[atom];
    std::sort(order.begin(), order.end(), [&](const Neighbor &x, const Neighbor &y) {
      return ranks[x.atom] < ranks[y.atom];
    });
    plan.neighbor_order[atom] = std::move(order);
  }
  for (const auto &component : mol.components()) {
    plan.roots.push_back(*std::min_element(
        component.begin(), component.end(),
        [&](int a, int b) { return ranks[a] < ranks[b]; }));
  }
  return plan;
}

// Groups directional bonds whose signs are geometrically coupled: bonds
// sharing an atom, or sitting on opposite ends of the same double bond,
// must flip together.
std::vector<int> direction_clusters(const Molecule &mol) {
  std::vector<int> cluster(mol.bonds.size(), -1);
  std::vector<int> directional;
  for (std::size_t i = 0; i < mol.bonds.size(); ++i) {
    if (mol.bonds[i].direction != BondDirection::kNone) {
      directional.push_back(static_cast<int>(i));
    }
  }
  std::vector<int> parent(directional.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  auto slot_of = [&](int bond_index) {
    return static_cast<int>(std::lower_bound(directional.begin(),
                                             directional.end(), bond_index) -
                            directional.begin());
  };
  auto touches = [&](const Bond &bond, int atom) {
    return bond.a == atom || bond.b == atom;
  };
  for (std::size_t i = 0; i < directional.size(); ++i) {
    for (std::size_t j = i + 1; j < directional.size(); ++j) {
      const Bond &x = mol.bonds[directional[i]];
      const Bond &y = mol.bonds[directional[j]];
      if (touches(x, y.a) || touches(x, y.b)) {
        unite(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  for (const Bond &bond : mol.bonds) {
    if (bond.order != BondOrder::kDouble) {
      continue;
    }
    int first = -1;
    for (int d : directional) {
      const Bond &dir_bond = mol.bonds[d];
      if (touches(dir_bond, bond.a) || touches(dir_bond, bond.b)) {
        if (first < 0) {
          first = slot_of(d);
        } else {
          unite(first, slot_of(d));
        }
      }
    }
  }
  for (std::size_t i = 0; i < directional.size(); ++i) {
    cluster[directional[i]] = find(static_cast<int>(i));
  }
  return cluster;
}

std::string canonical_fragment(const Molecule &fragment) {
  std::vector<int> ranks(fragment.atoms.size(), 0);
  const auto inc = fragment.incidence();
  const auto in_ring = fragment.ring_membership();
  std::vector<int> members(fragment.atoms.size());
  std::iota(members.begin(), members.end(), 0);
  rank_fragment(fragment, inc, in_ring, members, ranks);
  const WritePlan plan = plan_from_ranks(fragment, ranks);

  if (std::none_of(fragment.bonds.begin(), fragment.bonds.end(),
                   [](const Bond &b) {
                     return b.direction != BondDirection::kNone;
                   })) {
    return write_smiles(fragment, plan);
  }

  // Fix directional signs: the first emitted character of every coupled
  // cluster becomes '/', so equivalent geometries share one rendering.
  WriteTrace trace;
  (void)write_smiles(fragment, plan, &trace);
  const std::vector<int> cluster = direction_clusters(fragment);
  std::set<int> seen;
  std::set<int> flip;
  for (const auto &[bond_index, c] : trace.directional) {
    const int group = cluster[bond_index];
    if (seen.insert(group).second && c == '\\') {
      flip.insert(group);
    }
  }
  if (flip.empty()) {
    return write_smiles(fragment, plan);
  }
  Molecule fixed = fragment;
  for (std::size_t i = 0; i < fixed.bonds.size(); ++i) {
    if (cluster[i] >= 0 && flip.count(cluster[i]) > 0) {
      fixed.bonds[i].direction = flipped(fixed.bonds[i].direction);
    }
  }
  return write_smiles(fixed, plan);
}

}  // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  std::vector<int> ranks(mol.atoms.size(), 0);
  const auto inc = mol.incidence();
  const auto in_ring = mol.ring_membership();
  for (const auto &component : mol.components()) {
    rank_fragment(mol, inc, in_ring, component, ranks);
  }
  return ranks;
}

std::string canonicalize(const Molecule &mol) {
  if (mol.atoms.empty()) {
    throw std::invalid_argument("cannot canonicalize an empty molecule");
  }
  std::vector<std::pair<int, std::string>> rendered;
  for (const Molecule &fragment : split_fragments(mol)) {
    rendered.emplace_back(fragment.heavy_atom_count(),
                          canonical_fragment(fragment));
  }
  std::sort(rendered.begin(), rendered.end(),
            [](const auto &x, const auto &y) {
              if (x.first != y.first) {
                return x.first > y.first;
              }
              return x.second < y.second;
            });
  std::string joined;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    if (i > 0) {
      joined += '.';
    }
    joined += rendered[i].second;
  }
  return joined;
}

}  // namespace rxnaug::smiles
