//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SMILES_FRAGMENTS_HPP_
#define RXNAUG_SMILES_FRAGMENTS_HPP_

#include <vector>

#include "rxnaug/smiles/molecule.hpp"

namespace rxnaug::smiles {

// Connected components as standalone molecules, ordered by the smallest
// original atom index (which preserves the input fragment order).
std::vector<Molecule> split_fragments(const Molecule &mol);

// Fragment with the most heavy atoms, ties broken by longer canonical string
// then lexicographically smaller canonical string.
Molecule largest_fragment(const Molecule &mol);

}  // namespace rxnaug::smiles

#endif  // RXNAUG_SMILES_FRAGMENTS_HPP_
