//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SMILES_CANONICAL_HPP_
#define RXNAUG_SMILES_CANONICAL_HPP_

#include <string>
#include <vector>

#include "rxnaug/smiles/molecule.hpp"

namespace rxnaug::smiles {

// Canonical atom ranks, a permutation of 0..k-1 within each fragment.
//
// Initial invariant: (element, aromatic flag, degree, charge, stored H
// count, ring membership, isotope). Iterative neighborhood refinement runs
// to a fixed point, a stereo descriptor round separates parity-distinct
// atoms, and remaining ties are broken by lowest atom index with
// re-refinement after every break.
std::vector<int> canonical_ranks(const Molecule &mol);

// Deterministic canonical SMILES. Identical for all stereo-preserving
// isomorphic graphs produced by this toolkit's parser/writer. Fragments are
// rendered separately and joined with "." sorted by descending heavy-atom
// count, then lexicographically.
std::string canonicalize(const Molecule &mol);

}  // namespace rxnaug::smiles

#endif  // RXNAUG_SMILES_CANONICAL_HPP_
