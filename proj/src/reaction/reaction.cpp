//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/reaction/reaction.hpp"

#include <algorithm>

#include "rxnaug/smiles/canonical.hpp"
#include "rxnaug/smiles/fragments.hpp"
#include "rxnaug/smiles/parse.hpp"
#include "rxnaug/util/io.hpp"

namespace rxnaug::reaction {

namespace {

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// Parses one "."-joined molecule list; an empty string is an empty list.
std::vector<smiles::Molecule> parse_side(const std::string &side,
                                         const char *role) {
  std::vector<smiles::Molecule> molecules;
  if (side.empty()) {
    return molecules;
  }
  const auto pieces = split(side, '.');
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    try {
      molecules.push_back(smiles::parse_smiles(pieces[i]));
    } catch (const smiles::ParseError &e) {
      throw smiles::ParseError(
          std::string(role) + " fragment " + std::to_string(i) + ": " + e.what(),
          e.offset());
    }
  }
  return molecules;
}

}  // namespace

std::vector<const smiles::Molecule *> ReactionRecord::source_molecules() const {
  std::vector<const smiles::Molecule *> side;
  if (direction == Direction::kRetro) {
    for (const auto &mol : products) {
      side.push_back(&mol);
    }
  } else {
    for (const auto &mol : reactants) {
      side.push_back(&mol);
    }
    for (const auto &mol : reagents) {
      side.push_back(&mol);
    }
  }
  return side;
}

std::vector<const smiles::Molecule *> ReactionRecord::target_molecules() const {
  std::vector<const smiles::Molecule *> side;
  if (direction == Direction::kRetro) {
    for (const auto &mol : reactants) {
      side.push_back(&mol);
    }
    for (const auto &mol : reagents) {
      side.push_back(&mol);
    }
  } else {
    for (const auto &mol : products) {
      side.push_back(&mol);
    }
  }
  return side;
}

ReactionRecord parse_reaction(const std::string &line, LineFormat format,
                              Direction direction) {
  ReactionRecord record;
  record.direction = direction;

  const auto columns = split(line, ',');
  const std::size_t reaction_columns = format == LineFormat::kPair ? 2 : 1;
  if (columns.size() < reaction_columns ||
      columns.size() > reaction_columns + 1) {
    throw DataError("malformed line, expected " +
                    std::to_string(reaction_columns) +
                    " reaction column(s) and an optional class label: " + line);
  }
  if (columns.size() == reaction_columns + 1) {
    record.class_label = columns.back();
  }

  if (format == LineFormat::kPair) {
    std::string source = columns[0];
    if (!source.empty() && source.front() == '.') {
      record.direction = Direction::kForward;
      source.erase(source.begin());
    }
    const std::string &target = columns[1];
    if (record.direction == Direction::kRetro) {
      record.products = parse_side(source, "source");
      record.reactants = parse_side(target, "target");
    } else {
      record.reactants = parse_side(source, "source");
      record.products = parse_side(target, "target");
    }
  } else {
    const auto sides = split(columns[0], '>');
    if (format == LineFormat::kSeparated) {
      if (sides.size() != 3) {
        throw DataError("malformed separators, expected A>B>P: " + columns[0]);
      }
      record.reactants = parse_side(sides[0], "reactant");
      record.reagents = parse_side(sides[1], "reagent");
      record.products = parse_side(sides[2], "product");
    } else {
      if (sides.size() != 3 || !sides[1].empty()) {
        throw DataError("malformed separators, expected A.B>>P: " + columns[0]);
      }
      record.reactants = parse_side(sides[0], "reactant");
      record.products = parse_side(sides[2], "product");
    }
  }

  if (record.products.empty()) {
    throw DataError("empty product side: " + line);
  }
  return record;
}

LineFormat line_format_from_name(const std::string &name) {
  if (name == "separated") {
    return LineFormat::kSeparated;
  }
  if (name == "mixed") {
    return LineFormat::kMixed;
  }
  if (name == "pair") {
    return LineFormat::kPair;
  }
  throw DataError("unknown line format: " + name);
}

std::string canonical_side(const std::vector<const smiles::Molecule *> &side) {
  std::string joined;
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (i > 0) {
      joined += '.';
    }
    joined += smiles::canonicalize(*side[i]);
  }
  return joined;
}

ReactionRecord keep_largest_fragments(const ReactionRecord &record, int k) {
  if (k <= 0) {
    throw DataError("keep_largest_fragments requires k >= 1");
  }
  // Flatten the target side into fragments and rank them.
  std::vector<smiles::Molecule> fragments;
  for (const smiles::Molecule *mol : record.target_molecules()) {
    for (auto &fragment : smiles::split_fragments(*mol)) {
      fragments.push_back(std::move(fragment));
    }
  }
  struct Ranked {
    int heavy;
    std::string canonical;
    std::size_t index;
  };
  std::vector<Ranked> ranked;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    ranked.push_back(
        {fragments[i].heavy_atom_count(), smiles::canonicalize(fragments[i]), i});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked &x, const Ranked &y) {
    if (x.heavy != y.heavy) {
      return x.heavy > y.heavy;
    }
    if (x.canonical.size() != y.canonical.size()) {
      return x.canonical.size() > y.canonical.size();
    }
    return x.canonical < y.canonical;
  });

  ReactionRecord reduced = record;
  std::vector<smiles::Molecule> kept;
  const std::size_t keep = std::min<std::size_t>(k, ranked.size());
  for (std::size_t i = 0; i < keep; ++i) {
    kept.push_back(std::move(fragments[ranked[i].index]));
  }
  if (record.direction == Direction::kRetro) {
    reduced.reactants = std::move(kept);
    reduced.reagents.clear();
  } else {
    reduced.products = std::move(kept);
  }
  return reduced;
}

}  // namespace rxnaug::reaction
