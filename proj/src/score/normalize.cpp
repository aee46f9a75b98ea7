//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>

#include "rxnaug/score/ranking.hpp"
#include "rxnaug/smiles/canonical.hpp"
#include "rxnaug/smiles/fragments.hpp"
#include "rxnaug/smiles/parse.hpp"

namespace rxnaug::score {

std::optional<std::string> normalize_prediction(const std::string &raw_text) {
  smiles::Molecule mol;
  try {
    mol = smiles::parse_smiles(raw_text);
  } catch (const smiles::ParseError &) {
    return std::nullopt;
  }
  struct Piece {
    int heavy;
    std::string canonical;
  };
  std::vector<Piece> pieces;
  for (const auto &fragment : smiles::split_fragments(mol)) {
    pieces.push_back({fragment.heavy_atom_count(), smiles::canonicalize(fragment)});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece &x, const Piece &y) {
    if (x.heavy != y.heavy) {
      return x.heavy > y.heavy;
    }
    if (x.canonical.size() != y.canonical.size()) {
      return x.canonical.size() > y.canonical.size();
    }
    return x.canonical < y.canonical;
  });
  std::string joined;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) {
      joined += '.';
    }
    joined += pieces[i].canonical;
  }
  return joined;
}

std::vector<NormalizedPrediction> normalize_entries(
    const std::vector<PredictionEntry> &entries) {
  std::vector<NormalizedPrediction> out;
  out.reserve(entries.size());
  for (const PredictionEntry &entry : entries) {
    out.push_back({entry, normalize_prediction(entry.raw_text)});
  }
  return out;
}

}  // namespace rxnaug::score
