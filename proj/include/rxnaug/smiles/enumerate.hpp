//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SMILES_ENUMERATE_HPP_
#define RXNAUG_SMILES_ENUMERATE_HPP_

#include <cstdint>
#include <string>

#include "rxnaug/smiles/molecule.hpp"

namespace rxnaug::smiles {

struct EnumerationSeed {
  std::uint64_t seed = 0;
};

// Random alternative SMILES: uniform start atom per fragment and uniform
// neighbor order at every DFS step. Identical seed and molecule give an
// identical string; the result always re-parses to an isomorphic graph.
std::string enumerate_random(const Molecule &mol, EnumerationSeed seed);

}  // namespace rxnaug::smiles

#endif  // RXNAUG_SMILES_ENUMERATE_HPP_
