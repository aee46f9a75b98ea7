//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/smiles/enumerate.hpp"

#include "rxnaug/smiles/write.hpp"
#include "rxnaug/util/rng.hpp"

namespace rxnaug::smiles {

std::string enumerate_random(const Molecule &mol, EnumerationSeed seed) {
  Rng rng(seed.seed);
  WritePlan plan;
  for (const auto &component : mol.components()) {
    plan.roots.push_back(component[uniform_index(rng, component.size())]);
  }
  plan.neighbor_order = mol.incidence();
  for (auto &order : plan.neighbor_order) {
    shuffle_inplace(rng, order);
  }
  return write_smiles(mol, plan);
}

}  // namespace rxnaug::smiles
