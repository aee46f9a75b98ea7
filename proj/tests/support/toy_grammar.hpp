//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_TESTS_SUPPORT_TOY_GRAMMAR_HPP_
#define RXNAUG_TESTS_SUPPORT_TOY_GRAMMAR_HPP_

#include <cstdint>
#include <vector>

#include "rxnaug/reaction/reaction.hpp"

namespace rxnaug::testing {

// Template-reaction generator for end-to-end experiments. Products are two
// random chain fragments glued by an amide or ester linker; the retro target
// splits the product at the linker into the acid and the amine/alcohol.
// Products are unique per dataset, so the mapping is a function.
std::vector<rxnaug::reaction::ReactionRecord> make_toy_reactions(
    std::size_t count, std::uint64_t seed);

}  // namespace rxnaug::testing

#endif  // RXNAUG_TESTS_SUPPORT_TOY_GRAMMAR_HPP_
