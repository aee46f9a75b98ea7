//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_SMILES_MOLECULE_HPP_
#define RXNAUG_SMILES_MOLECULE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rxnaug::smiles {

// '@' in SMILES is counterclockwise, '@@' is clockwise.
enum class Chirality : std::uint8_t { kNone, kClockwise, kCounterclockwise };

enum class BondOrder : std::uint8_t { kSingle, kDouble, kTriple, kAromatic };

// Directional single-bond annotation ('/' = up, '\' = down), oriented from
// Bond::a to Bond::b. Traversing the bond b->a flips up and down.
enum class BondDirection : std::uint8_t { kNone, kUp, kDown };

// Sentinel used inside Atom::chiral_ref for a bracket-implicit hydrogen.
inline constexpr int kImplicitHNeighbor = -1;

struct Atom {
  // Element symbol in standard capitalization ("C", "Br"); aromatic atoms
  // carry the flag and are rendered lowercase on output.
  std::string element;
  bool aromatic = false;
  int charge = 0;
  // Present exactly for bracket atoms; a bare bracket atom stores 0.
  std::optional<int> explicit_h;
  std::optional<int> isotope;
  Chirality chirality = Chirality::kNone;
  // Reference neighbor ordering for the chirality symbol, in the order the
  // neighbors appeared around this atom in the source text. Entries are atom
  // indices, or kImplicitHNeighbor for the in-bracket hydrogen.
  std::vector<int> chiral_ref;

  bool needs_bracket() const;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
  BondDirection direction = BondDirection::kNone;

  int other(int atom) const { return atom == a ? b : a; }
};

// One entry of an atom's incidence list.
struct Neighbor {
  int atom = 0;
  int bond = 0;
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  bool empty() const { return atoms.empty(); }

  // Incidence lists indexed by atom, neighbors in bond-insertion order.
  std::vector<std::vector<Neighbor>> incidence() const;

  // Connected components as atom index lists, ordered by smallest member.
  std::vector<std::vector<int>> components() const;

  // Atoms whose element is not hydrogen.
  int heavy_atom_count() const;

  // True for atoms incident to at least one cycle edge.
  std::vector<bool> ring_membership() const;
};

BondDirection flipped(BondDirection dir);

}  // namespace rxnaug::smiles

#endif  // RXNAUG_SMILES_MOLECULE_HPP_
