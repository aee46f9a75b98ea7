//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SMILES_PARSE_HPP_
#define RXNAUG_SMILES_PARSE_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "rxnaug/smiles/molecule.hpp"

namespace rxnaug::smiles {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Parses a (possibly multi-fragment) SMILES string into a molecular graph.
//
// Grammar subset: organic-subset atoms (B C N O P S F Cl Br I, aromatic
// b c n o p s), bracket atoms with isotope / chirality / H-count / charge,
// ring closures 1-9 and %nn, branches, "." fragment separators, bond symbols
// - = # : / \. Atom maps ([CH3:7]) are accepted and stripped. No valence or
// aromaticity model is applied: a string is valid iff this grammar accepts it.
Molecule parse_smiles(std::string_view text);

// True iff the string contains any of the stereo markers / \ @ @@.
bool contains_stereo(std::string_view text);

}  // namespace rxnaug::smiles

#endif  // RXNAUG_SMILES_PARSE_HPP_
