//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SMILES_WRITE_HPP_
#define RXNAUG_SMILES_WRITE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "rxnaug/smiles/molecule.hpp"

namespace rxnaug::smiles {

// Atom visitation plan for the writer: one DFS root per fragment (fragments
// are emitted in root order) plus, for every atom, the order its incident
// bonds are explored. Edges leading to visited atoms become ring closures.
struct WritePlan {
  std::vector<int> roots;
  std::vector<std::vector<Neighbor>> neighbor_order;
};

// Order of emitted directional-bond characters, for canonical sign fixing.
struct WriteTrace {
  std::vector<std::pair<int, char>> directional;  // (bond index, '/' or '\\')
};

// Renders the molecule following the plan. Tetrahedral symbols are flipped
// per transposition count between the stored reference neighbor order and
// the emitted order; directional bonds flip when traversed b->a. Throws
// std::invalid_argument on plans that miss atoms or disconnect a fragment.
std::string write_smiles(const Molecule &mol, const WritePlan &plan,
                         WriteTrace *trace = nullptr);

}  // namespace rxnaug::smiles

#endif  // RXNAUG_SMILES_WRITE_HPP_
