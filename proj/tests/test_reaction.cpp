//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rxnaug/reaction/augment.hpp"
#include "rxnaug/reaction/dataset_io.hpp"
#include "rxnaug/reaction/filter.hpp"
#include "rxnaug/reaction/reaction.hpp"
#include "rxnaug/smiles/canonical.hpp"
#include "rxnaug/smiles/fragments.hpp"
#include "rxnaug/smiles/parse.hpp"
#include "rxnaug/util/io.hpp"

using namespace rxnaug;
using namespace rxnaug::reaction;

namespace {

// The two worked examples used throughout the augmentation tables.
const char *kAminePair = "CC(c1ccc(Br)nc1)N(C)C,CC(=O)c1ccc(Br)nc1.CNC";
const char *kAcidPair = "O=Cc1cncc(Br)c1,O=C(O)c1cncc(Br)c1";

std::vector<ReactionRecord> table_records() {
  std::vector<ReactionRecord> records;
  records.push_back(parse_reaction(kAminePair, LineFormat::kPair));
  records.back().id = "amine";
  records.push_back(parse_reaction(kAcidPair, LineFormat::kPair));
  records.back().id = "acid";
  return records;
}

std::string canon(const std::string &text) {
  return smiles::canonicalize(smiles::parse_smiles(text));
}

std::multiset<std::string> canonical_fragments(const std::string &side) {
  std::multiset<std::string> out;
  for (const auto &fragment :
       smiles::split_fragments(smiles::parse_smiles(side))) {
    out.insert(smiles::canonicalize(fragment));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_reaction handles all three formats") {
  const auto mixed = parse_reaction(
      "CC(=O)c1ccc(Br)nc1.CNC>>CC(c1ccc(Br)nc1)N(C)C", LineFormat::kMixed);
  CHECK(mixed.reactants.size() == 2);
  CHECK(mixed.reagents.empty());
  CHECK(mixed.products.size() == 1);

  const auto separated = parse_reaction("CCO>O>CCC", LineFormat::kSeparated);
  CHECK(separated.reactants.size() == 1);
  CHECK(separated.reagents.size() == 1);
  CHECK(separated.products.size() == 1);
  CHECK(smiles::canonicalize(separated.reactants[0]) == canon("CCO"));
  CHECK(smiles::canonicalize(separated.reagents[0]) == canon("O"));
  CHECK(smiles::canonicalize(separated.products[0]) == canon("CCC"));

  CHECK_THROWS_AS(parse_reaction("CCO>>", LineFormat::kMixed), DataError);
  CHECK_THROWS_AS(parse_reaction("CCO>CCC", LineFormat::kSeparated), DataError);
  CHECK_THROWS_AS(parse_reaction("CCO.C>C>CC", LineFormat::kMixed), DataError);

  const auto pair = parse_reaction(kAminePair, LineFormat::kPair);
  CHECK(pair.direction == Direction::kRetro);
  CHECK(pair.products.size() == 1);
  CHECK(pair.reactants.size() == 2);

  const auto forward = parse_reaction(".CCO.CC,CCOCC", LineFormat::kPair);
  CHECK(forward.direction == Direction::kForward);
  CHECK(forward.reactants.size() == 2);
  CHECK(forward.products.size() == 1);

  const auto labeled = parse_reaction("CCO>O>CCC,3", LineFormat::kSeparated);
  CHECK(labeled.class_label == "3");
}

TEST_CASE("parse_reaction reports the failing fragment") {
  try {
    parse_reaction("CCO.C(>>CCC", LineFormat::kMixed);
    FAIL("expected ParseError");
  } catch (const smiles::ParseError &e) {
    CHECK(std::string(e.what()).find("fragment 1") != std::string::npos);
  }
}

TEST_CASE("filter_dataset applies the documented rules") {
  FilterRules rules;  // defaults: 5 atoms, 5 chars, drop empties, dedup
  std::vector<ReactionRecord> records;

  ReactionRecord no_reactants;
  no_reactants.id = "r0";
  no_reactants.products.push_back(smiles::parse_smiles("[OH2:11]"));
  records.push_back(no_reactants);

  // Four heavy atoms of reactants in total.
  auto small = parse_reaction("CC.CC>>CCCCCC", LineFormat::kMixed);
  small.id = "r1";
  records.push_back(small);

  auto fine = parse_reaction("CC(=O)c1ccc(Br)nc1.CNC>>CC(c1ccc(Br)nc1)N(C)C",
                             LineFormat::kMixed);
  fine.id = "r2";
  records.push_back(fine);

  auto dup = parse_reaction("CNC.CC(=O)c1ccc(Br)nc1>>CC(N(C)C)c1ccc(Br)nc1",
                            LineFormat::kMixed);
  dup.id = "r3";
  records.push_back(dup);

  auto short_product = parse_reaction("CCCCCO>>CC", LineFormat::kMixed);
  short_product.id = "r4";
  records.push_back(short_product);

  const auto result = filter_dataset(records, rules);
  REQUIRE(result.kept.size() == 1);
  CHECK(result.kept[0].id == "r2");
  REQUIRE(result.rejected.size() == 4);
  CHECK(result.rejected[0].id == "r0");
  CHECK(result.rejected[0].rule == "min_reactant_atoms");
  CHECK(result.rejected[0].detail == "no reactants");
  CHECK(result.rejected[1].rule == "min_reactant_atoms");
  CHECK(result.rejected[2].id == "r3");
  CHECK(result.rejected[2].rule == "duplicate");
  CHECK(result.rejected[3].rule == "min_product_chars");
}

TEST_CASE("keep_largest_fragments reduces the target side") {
  auto record = parse_reaction(kAminePair, LineFormat::kPair);

  const auto k1 = keep_largest_fragments(record, 1);
  REQUIRE(k1.reactants.size() == 1);
  CHECK(smiles::canonicalize(k1.reactants[0]) == canon("CC(=O)c1ccc(Br)nc1"));
  CHECK(k1.reagents.empty());

  const auto k5 = keep_largest_fragments(record, 5);
  CHECK(k5.reactants.size() == 2);

  auto three = parse_reaction("CCCCCCC.CCCCC.CC>>CCCCCCCCCCCCCC",
                              LineFormat::kMixed);
  const auto k2 = keep_largest_fragments(three, 2);
  REQUIRE(k2.reactants.size() == 2);
  CHECK(k2.reactants[0].heavy_atom_count() == 7);
  CHECK(k2.reactants[1].heavy_atom_count() == 5);

  CHECK_THROWS_AS(keep_largest_fragments(record, 0), DataError);
}

TEST_CASE("protocol names parse and print") {
  CHECK(protocol_from_name("x1") == std::pair{Protocol::kXN, std::optional<int>{1}});
  CHECK(protocol_from_name("xN") == std::pair{Protocol::kXN, std::optional<int>{}});
  CHECK(protocol_from_name("x5F") == std::pair{Protocol::kXNF, std::optional<int>{5}});
  CHECK(protocol_from_name("xNR") == std::pair{Protocol::kXNR, std::optional<int>{}});
  CHECK(protocol_from_name("x2M") == std::pair{Protocol::kXNM, std::optional<int>{2}});
  CHECK(protocol_from_name("x3S") == std::pair{Protocol::kXNS, std::optional<int>{3}});
  CHECK_THROWS_AS(protocol_from_name("y2"), DataError);
  CHECK_THROWS_AS(protocol_from_name("x2Z"), DataError);
}

TEST_CASE("xN keeps canonical targets and a canonical first variant") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXN;
  spec.n = 2;
  spec.master_seed = 7;
  const auto pairs = augment(table_records(), spec);
  REQUIRE(pairs.size() == 4);

  const std::string target0 = canon("CC(=O)c1ccc(Br)nc1.CNC");
  CHECK(pairs[0].variant_index == 0);
  CHECK(pairs[0].source == canon("CC(c1ccc(Br)nc1)N(C)C"));
  CHECK(pairs[0].target == target0);
  // Variant 1: random source, canonical target, byte-equal to variant 0's.
  CHECK(pairs[1].variant_index == 1);
  CHECK(pairs[1].target == pairs[0].target);
  CHECK(canon(pairs[1].source) == canon(pairs[0].source));
}

TEST_CASE("x1 degenerates to the canonical pair for every protocol") {
  for (Protocol protocol : {Protocol::kXN, Protocol::kXNF, Protocol::kXNS}) {
    AugmentationSpec spec;
    spec.protocol = protocol;
    spec.n = 1;
    const auto pairs = augment(table_records(), spec);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].source == canon("CC(c1ccc(Br)nc1)N(C)C"));
    CHECK(pairs[0].target == canon("CC(=O)c1ccc(Br)nc1.CNC"));
    CHECK(pairs[1].source == canon("O=Cc1cncc(Br)c1"));
    CHECK(pairs[1].target == canon("O=C(O)c1cncc(Br)c1"));
  }
}

TEST_CASE("xNR pins one fixed random target per record") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXNR;
  spec.n = 3;
  spec.master_seed = 11;
  const auto pairs = augment(table_records(), spec);
  REQUIRE(pairs.size() == 6);
  for (int r = 0; r < 2; ++r) {
    const auto &v0 = pairs[r * 3];
    CHECK(v0.variant_index == 0);
    CHECK(pairs[r * 3 + 1].target == v0.target);
    CHECK(pairs[r * 3 + 2].target == v0.target);
    CHECK(canon(v0.target) ==
          canon(r == 0 ? "CC(=O)c1ccc(Br)nc1.CNC" : "O=C(O)c1cncc(Br)c1"));
  }
  // The source of variant 0 is still canonical.
  CHECK(pairs[0].source == canon("CC(c1ccc(Br)nc1)N(C)C"));
}

TEST_CASE("xNF randomizes both sides but keeps fragment order") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXNF;
  spec.n = 4;
  spec.master_seed = 3;
  const auto records = table_records();
  const auto pairs = augment(records, spec);
  REQUIRE(pairs.size() == 8);
  for (int v = 1; v < 4; ++v) {
    const auto &pair = pairs[v];
    const auto pieces_new = smiles::split_fragments(smiles::parse_smiles(pair.target));
    REQUIRE(pieces_new.size() == 2);
    // Order unchanged: position i canonicalizes to reactant i.
    CHECK(smiles::canonicalize(pieces_new[0]) == canon("CC(=O)c1ccc(Br)nc1"));
    CHECK(smiles::canonicalize(pieces_new[1]) == canon("CNC"));
  }
}

TEST_CASE("xNS shuffles target fragments without dropping any") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXNS;
  spec.n = 16;
  spec.master_seed = 5;
  const auto pairs = augment(table_records(), spec);
  REQUIRE(pairs.size() == 32);
  const auto expected = canonical_fragments("CC(=O)c1ccc(Br)nc1.CNC");
  bool saw_swapped_order = false;
  for (int v = 0; v < 16; ++v) {
    CHECK(canonical_fragments(pairs[v].target) == expected);
    const auto pieces = smiles::split_fragments(smiles::parse_smiles(pairs[v].target));
    if (smiles::canonicalize(pieces[0]) == canon("CNC")) {
      saw_swapped_order = true;
    }
  }
  CHECK(saw_swapped_order);
}

TEST_CASE("xNM interleaves inverted forward pairs with dot prefixes") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXNM;
  spec.n = 2;
  spec.master_seed = 9;
  const auto pairs = augment(table_records(), spec);
  REQUIRE(pairs.size() == 8);  // 2 records x n=2 x 2 directions

  for (std::size_t i = 0; i < pairs.size(); i += 2) {
    const auto &retro = pairs[i];
    const auto &fwd = pairs[i + 1];
    CHECK(retro.source.front() != '.');
    REQUIRE_FALSE(fwd.source.empty());
    CHECK(fwd.source.front() == '.');
    CHECK(fwd.source.substr(1) == retro.target);
    CHECK(fwd.target == retro.source);
    CHECK(fwd.variant_index == retro.variant_index);
  }
}

TEST_CASE("forward records serialize with dotted sources") {
  auto record = parse_reaction(".CCO.CC,CCOCC", LineFormat::kPair);
  record.id = "fwd";
  AugmentationSpec spec;
  spec.protocol = Protocol::kXN;
  spec.n = 3;
  spec.master_seed = 4;
  const auto pairs = augment({record}, spec);
  REQUIRE(pairs.size() == 3);
  for (const auto &pair : pairs) {
    REQUIRE_FALSE(pair.source.empty());
    CHECK(pair.source.front() == '.');
    CHECK(canon(pair.target) == canon("CCOCC"));
  }
  CHECK(pairs[0].source == "." + canon("CCO") + "." + canon("CC"));

  // Under xNM the inverted lines are retro and lose the dot.
  AugmentationSpec mixed;
  mixed.protocol = Protocol::kXNM;
  mixed.n = 2;
  const auto mixed_pairs = augment({record}, mixed);
  REQUIRE(mixed_pairs.size() == 4);
  CHECK(mixed_pairs[0].source.front() == '.');
  CHECK(mixed_pairs[1].source.front() != '.');
  CHECK(mixed_pairs[1].source == mixed_pairs[0].target);
}

TEST_CASE("augment output is invariant under record reordering") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXNS;
  spec.n = 4;
  spec.master_seed = 21;
  auto records = table_records();
  const auto forward_order = augment(records, spec);
  std::reverse(records.begin(), records.end());
  const auto reverse_order = augment(records, spec);

  std::map<std::string, std::vector<std::pair<std::string, std::string>>> by_id;
  for (const auto &pair : forward_order) {
    by_id[pair.reaction_id].emplace_back(pair.source, pair.target);
  }
  for (const auto &pair : reverse_order) {
    auto &expected = by_id[pair.reaction_id];
    REQUIRE_FALSE(expected.empty());
    CHECK(expected.front() == std::pair{pair.source, pair.target});
    expected.erase(expected.begin());
  }
}

TEST_CASE("augment size law holds") {
  const auto records = table_records();
  for (Protocol protocol :
       {Protocol::kXN, Protocol::kXNR, Protocol::kXNF, Protocol::kXNS}) {
    for (int n : {1, 3, 5}) {
      AugmentationSpec spec;
      spec.protocol = protocol;
      spec.n = n;
      CHECK(augment(records, spec).size() == records.size() * n);
    }
  }
  AugmentationSpec mixed;
  mixed.protocol = Protocol::kXNM;
  mixed.n = 3;
  CHECK(augment(records, mixed).size() == 2 * records.size() * 3);

  AugmentationSpec bad;
  bad.n = 0;
  CHECK_THROWS_AS(augment(records, bad), DataError);
}

TEST_CASE("dataset files round-trip byte for byte") {
  AugmentationSpec spec;
  spec.protocol = Protocol::kXNF;
  spec.n = 5;
  spec.master_seed = 2;
  const auto pairs = augment(table_records(), spec);

  const auto path = std::filesystem::temp_directory_path() / "rxnaug_pairs.txt";
  write_dataset(pairs, path);
  const std::string bytes = read_file(path);
  const auto reread = read_dataset(path);
  REQUIRE(reread.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(reread[i].source == pairs[i].source);
    CHECK(reread[i].target == pairs[i].target);
  }
  write_dataset(reread, path);
  CHECK(read_file(path) == bytes);
  std::filesystem::remove(path);

  CHECK(render_dataset({}).empty());
  CHECK_THROWS_AS(parse_dataset("a,b,c\n"), DataError);
  CHECK_THROWS_AS(parse_dataset("abc\n"), DataError);
}
