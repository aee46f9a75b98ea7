//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_REACTION_REACTION_HPP_
#define RXNAUG_REACTION_REACTION_HPP_

#include <string>
#include <vector>

#include "rxnaug/smiles/molecule.hpp"

namespace rxnaug::reaction {

// Retro records map product -> precursors; forward records map precursors ->
// product and serialize their source with a leading ".".
enum class Direction { kRetro, kForward };

// "separated": A>B>P. "mixed": A.B>>P, reagents pooled into reactants.
// "pair": source,target training/test lines.
enum class LineFormat { kSeparated, kMixed, kPair };

struct ReactionRecord {
  std::vector<smiles::Molecule> reactants;
  std::vector<smiles::Molecule> reagents;
  std::vector<smiles::Molecule> products;
  Direction direction = Direction::kRetro;
  std::string class_label;
  std::string id;

  // Model input molecules: products for retro records, precursors otherwise.
  std::vector<const smiles::Molecule *> source_molecules() const;
  // Prediction target molecules: the complementary side.
  std::vector<const smiles::Molecule *> target_molecules() const;
};

// Parses one reaction line. An optional trailing ",label" column carries the
// class label in every format; pair sources starting with "." flip the
// record to forward. Throws DataError on malformed separators or an empty
// product side, and ParseError (with fragment index context) on fragment
// SMILES errors.
ReactionRecord parse_reaction(const std::string &line, LineFormat format,
                              Direction direction = Direction::kRetro);

LineFormat line_format_from_name(const std::string &name);

// Canonical serialization of a molecule list, "." joined in stored order.
std::string canonical_side(const std::vector<const smiles::Molecule *> &side);

// Reduces the record's target side to its k largest fragments (all fragments
// kept when k exceeds the count).
ReactionRecord keep_largest_fragments(const ReactionRecord &record, int k);

}  // namespace rxnaug::reaction

#endif  // RXNAUG_REACTION_REACTION_HPP_
