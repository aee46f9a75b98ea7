//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_REACTION_AUGMENT_HPP_
#define RXNAUG_REACTION_AUGMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rxnaug/reaction/reaction.hpp"

namespace rxnaug::reaction {

// Training-set augmentation protocols. xN randomizes the source only; xNR
// pins one fixed random target; xNF randomizes both sides; xNS additionally
// shuffles target fragment order; xNM interleaves every retro pair with its
// inverted forward pair (forward sources carry a "." prefix).
enum class Protocol { kXN, kXNR, kXNF, kXNS, kXNM };

struct AugmentationSpec {
  Protocol protocol = Protocol::kXN;
  int n = 1;
  std::uint64_t master_seed = 0;
  std::optional<int> keep_largest_k;
};

struct AugmentedPair {
  std::string source;
  std::string target;
  int variant_index = 0;
  std::string reaction_id;
};

// Parses "x1", "xN", "xNR", "x5F", "x2M", ... Returns the protocol and, for
// literal forms like "x5F", the embedded n.
std::pair<Protocol, std::optional<int>> protocol_from_name(const std::string &name);

std::string protocol_name(Protocol protocol);

// Expands records into training pairs: n per record (2n for xNM), variant 0
// canonical. Per-record RNG derives from hash(master_seed, record id), so
// output is reproducible under parallel or reordered processing.
std::vector<AugmentedPair> augment(const std::vector<ReactionRecord> &records,
                                   const AugmentationSpec &spec);

}  // namespace rxnaug::reaction

#endif  // RXNAUG_REACTION_AUGMENT_HPP_
