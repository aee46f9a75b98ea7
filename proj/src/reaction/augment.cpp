//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/reaction/augment.hpp"

#include <algorithm>
#include <cctype>

#include "rxnaug/smiles/enumerate.hpp"
#include "rxnaug/util/io.hpp"
#include "rxnaug/util/rng.hpp"

namespace rxnaug::reaction {

namespace {

std::string random_side(const std::vector<const smiles::Molecule *> &side,
                        Rng &rng, bool shuffle_order) {
  std::vector<std::string> pieces;
  pieces.reserve(side.size());
  for (const smiles::Molecule *mol : side) {
    pieces.push_back(smiles::enumerate_random(*mol, {rng()}));
  }
  if (shuffle_order) {
    shuffle_inplace(rng, pieces);
  }
  std::string joined;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) {
      joined += '.';
    }
    joined += pieces[i];
  }
  return joined;
}

}  // namespace

std::pair<Protocol, std::optional<int>> protocol_from_name(
    const std::string &name) {
  if (name.size() < 2 || name[0] != 'x') {
    throw DataError("unknown augmentation protocol: " + name);
  }
  std::string digits;
  std::size_t pos = 1;
  while (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos]))) {
    digits += name[pos];
    ++pos;
  }
  const std::string tail = name.substr(pos);
  std::optional<int> n;
  if (!digits.empty()) {
    n = std::stoi(digits);
  } else if (tail.empty() || tail[0] != 'N') {
    throw DataError("unknown augmentation protocol: " + name);
  }
  const std::string suffix = digits.empty() ? tail.substr(1) : tail;
  Protocol protocol = Protocol::kXN;
  if (suffix.empty()) {
    protocol = Protocol::kXN;
  } else if (suffix == "R") {
    protocol = Protocol::kXNR;
  } else if (suffix == "F") {
    protocol = Protocol::kXNF;
  } else if (suffix == "S") {
    protocol = Protocol::kXNS;
  } else if (suffix == "M") {
    protocol = Protocol::kXNM;
  } else {
    throw DataError("unknown augmentation protocol: " + name);
  }
  return {protocol, n};
}

std::string protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::kXN:
      return "xN";
    case Protocol::kXNR:
      return "xNR";
    case Protocol::kXNF:
      return "xNF";
    case Protocol::kXNS:
      return "xNS";
    case Protocol::kXNM:
      return "xNM";
  }
  return "xN";
}

std::vector<AugmentedPair> augment(const std::vector<ReactionRecord> &records,
                                   const AugmentationSpec &spec) {
  if (spec.n < 1) {
    throw DataError("augmentation requires n >= 1");
  }
  std::vector<AugmentedPair> pairs;
  pairs.reserve(records.size() * static_cast<std::size_t>(spec.n) *
                (spec.protocol == Protocol::kXNM ? 2 : 1));

  for (std::size_t index = 0; index < records.size(); ++index) {
    const ReactionRecord *record = &records[index];
    ReactionRecord reduced;
    if (spec.keep_largest_k.has_value()) {
      reduced = keep_largest_fragments(*record, *spec.keep_largest_k);
      record = &reduced;
    }
    const std::string rid =
        record->id.empty() ? std::to_string(index) : record->id;
    Rng rng(derive_seed(spec.master_seed, fnv1a64(rid)));

    const auto source_side = record->source_molecules();
    const auto target_side = record->target_molecules();
    const std::string canonical_source = canonical_side(source_side);
    const std::string canonical_target = canonical_side(target_side);

    // xNR pins one random target rendering for every variant of the record.
    std::string fixed_target;
    if (spec.protocol == Protocol::kXNR) {
      fixed_target = random_side(target_side, rng, false);
    }

    const bool forward = record->direction == Direction::kForward;
    auto emit = [&](const std::string &src, const std::string &tgt,
                    bool pair_is_forward, int variant) {
      AugmentedPair pair;
      pair.source = pair_is_forward ? "." + src : src;
      pair.target = tgt;
      pair.variant_index = variant;
      pair.reaction_id = rid;
      pairs.push_back(std::move(pair));
    };

    for (int variant = 0; variant < spec.n; ++variant) {
      std::string src = variant == 0 ? canonical_source
                                     : random_side(source_side, rng, false);
      std::string tgt;
      switch (spec.protocol) {
        case Protocol::kXN:
          tgt = canonical_target;
          break;
        case Protocol::kXNR:
          tgt = fixed_target;
          break;
        case Protocol::kXNF:
          tgt = variant == 0 ? canonical_target
                             : random_side(target_side, rng, false);
          break;
        case Protocol::kXNS:
        case Protocol::kXNM:
          tgt = variant == 0 ? canonical_target
                             : random_side(target_side, rng, true);
          break;
      }
      emit(src, tgt, forward, variant);
      if (spec.protocol == Protocol::kXNM) {
        // Inverted pair: swap the rendered sides and flip the direction.
        emit(tgt, src, !forward, variant);
      }
    }
  }
  return pairs;
}

}  // namespace rxnaug::reaction
