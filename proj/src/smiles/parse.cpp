//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/smiles/parse.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

namespace rxnaug::smiles {

namespace {

const std::unordered_set<std::string_view> &element_symbols() {
  static const std::unordered_set<std::string_view> kSymbols = {
      "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
      "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
      "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
      "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
      "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
      "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
      "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
      "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
      "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
      "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};
  return kSymbols;
}

// Lowercase symbols accepted inside brackets as aromatic atoms.
const std::unordered_set<std::string_view> &aromatic_symbols() {
  static const std::unordered_set<std::string_view> kSymbols = {
      "b", "c", "n", "o", "p", "s", "se", "as", "te"};
  return kSymbols;
}

struct PendingBond {
  std::optional<BondOrder> order;
  BondDirection direction = BondDirection::kNone;
  std::size_t offset = 0;

  bool active() const {
    return order.has_value() || direction != BondDirection::kNone;
  }
  void clear() {
    order.reset();
    direction = BondDirection::kNone;
  }
};

struct RingSlot {
  int atom = 0;
  std::optional<BondOrder> order;
  BondDirection direction = BondDirection::kNone;  // written from the opener
  std::size_t offset = 0;
  int chiral_slot = -1;  // position in the opener's chiral_ref to patch
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule run() {
    if (text_.empty()) {
      throw ParseError("empty input", 0);
    }
    while (pos_ < text_.size()) {
      step();
    }
    finish();
    return std::move(mol_);
  }

 private:
  [[noreturn]] void fail(const std::string &what, std::size_t offset) const {
    throw ParseError(what, offset);
  }

  char peek() const { return text_[pos_]; }

  void step() {
    const char c = peek();
    const std::size_t here = pos_;
    switch (c) {
      case '-':
        set_bond(BondOrder::kSingle, BondDirection::kNone, here);
        ++pos_;
        return;
      case '=':
        set_bond(BondOrder::kDouble, BondDirection::kNone, here);
        ++pos_;
        return;
      case '#':
        set_bond(BondOrder::kTriple, BondDirection::kNone, here);
        ++pos_;
        return;
      case ':':
        set_bond(BondOrder::kAromatic, BondDirection::kNone, here);
        ++pos_;
        return;
      case '/':
        set_bond(BondOrder::kSingle, BondDirection::kUp, here);
        ++pos_;
        return;
      case '\\':
        set_bond(BondOrder::kSingle, BondDirection::kDown, here);
        ++pos_;
        return;
      case '(':
        if (prev_ < 0) {
          fail("branch with no preceding atom", here);
        }
        if (pending_.active()) {
          fail("bond before branch opening", here);
        }
        branches_.push_back({prev_, here});
        ++pos_;
        return;
      case ')':
        if (branches_.empty()) {
          fail("unbalanced parenthesis", here);
        }
        if (pending_.active()) {
          fail("dangling bond", pending_.offset);
        }
        prev_ = branches_.back().first;
        branches_.pop_back();
        ++pos_;
        return;
      case '.':
        if (!branches_.empty()) {
          fail("fragment separator inside branch", here);
        }
        if (pending_.active()) {
          fail("dangling bond", pending_.offset);
        }
        if (!atom_in_fragment_) {
          fail("empty fragment", here);
        }
        prev_ = -1;
        atom_in_fragment_ = false;
        ++pos_;
        return;
      case '%': {
        if (pos_ + 2 >= text_.size() || !std::isdigit(text_[pos_ + 1]) ||
            !std::isdigit(text_[pos_ + 2])) {
          fail("malformed %nn ring closure", here);
        }
        const int digit = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
        pos_ += 3;
        ring_closure(digit, here);
        return;
      }
      case '[':
        add_atom(parse_bracket_atom(), here);
        return;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++pos_;
      ring_closure(c - '0', here);
      return;
    }
    if (auto atom = try_parse_organic_atom()) {
      add_atom(std::move(*atom), here);
      return;
    }
    fail("unknown atom token", here);
  }

  void set_bond(BondOrder order, BondDirection dir, std::size_t offset) {
    if (prev_ < 0) {
      fail("bond with no preceding atom", offset);
    }
    if (pending_.active()) {
      fail("duplicate bond symbol", offset);
    }
    pending_.order = order;
    pending_.direction = dir;
    pending_.offset = offset;
  }

  std::optional<Atom> try_parse_organic_atom() {
    static constexpr std::array<std::string_view, 2> kTwoLetter = {"Cl", "Br"};
    for (std::string_view sym : kTwoLetter) {
      if (text_.substr(pos_, 2) == sym) {
        pos_ += 2;
        Atom atom;
        atom.element = sym;
        return atom;
      }
    }
    const char c = peek();
    static constexpr std::string_view kAliphatic = "BCNOPSFI";
    if (kAliphatic.find(c) != std::string_view::npos) {
      ++pos_;
      Atom atom;
      atom.element = std::string(1, c);
      return atom;
    }
    static constexpr std::string_view kAromatic = "bcnops";
    if (kAromatic.find(c) != std::string_view::npos) {
      ++pos_;
      Atom atom;
      atom.element = std::string(1, static_cast<char>(std::toupper(c)));
      atom.aromatic = true;
      return atom;
    }
    return std::nullopt;
  }

  Atom parse_bracket_atom() {
    const std::size_t open = pos_;
    ++pos_;  // '['
    Atom atom;
    atom.explicit_h = 0;

    std::size_t digits_start = pos_;
    int isotope = 0;
    while (pos_ < text_.size() && std::isdigit(text_[pos_])) {
      isotope = isotope * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ != digits_start) {
      if (isotope <= 0) {
        fail("invalid isotope", digits_start);
      }
      atom.isotope = isotope;
    }

    if (pos_ >= text_.size()) {
      fail("unterminated bracket atom", open);
    }

    // Element symbol: try the two-letter form first.
    bool matched = false;
    for (std::size_t len : {std::size_t{2}, std::size_t{1}}) {
      if (pos_ + len > text_.size()) {
        continue;
      }
      const std::string_view sym = text_.substr(pos_, len);
      if (std::isupper(static_cast<unsigned char>(sym[0])) &&
          element_symbols().count(sym) > 0) {
        atom.element = std::string(sym);
        pos_ += len;
        matched = true;
        break;
      }
      if (aromatic_symbols().count(sym) > 0) {
        atom.element = std::string(sym);
        atom.element[0] = static_cast<char>(std::toupper(atom.element[0]));
        atom.aromatic = true;
        pos_ += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      fail("unknown atom token", pos_);
    }

    if (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '@') {
        ++pos_;
        atom.chirality = Chirality::kClockwise;
      } else {
        atom.chirality = Chirality::kCounterclockwise;
      }
    }

    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      int count = 1;
      if (pos_ < text_.size() && std::isdigit(text_[pos_])) {
        count = 0;
        while (pos_ < text_.size() && std::isdigit(text_[pos_])) {
          count = count * 10 + (text_[pos_] - '0');
          ++pos_;
        }
      }
      atom.explicit_h = count;
    }

    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign_char = text_[pos_];
      const int sign = sign_char == '+' ? 1 : -1;
      ++pos_;
      int magnitude = 1;
      if (pos_ < text_.size() && std::isdigit(text_[pos_])) {
        magnitude = 0;
        while (pos_ < text_.size() && std::isdigit(text_[pos_])) {
          magnitude = magnitude * 10 + (text_[pos_] - '0');
          ++pos_;
        }
      } else {
        while (pos_ < text_.size() && text_[pos_] == sign_char) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.charge = sign * magnitude;
    }

    // Atom map: parsed and discarded.
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(text_[pos_])) {
        fail("malformed atom map", pos_);
      }
      while (pos_ < text_.size() && std::isdigit(text_[pos_])) {
        ++pos_;
      }
    }

    if (pos_ >= text_.size() || text_[pos_] != ']') {
      fail("unterminated bracket atom", open);
    }
    ++pos_;
    return atom;
  }

  void add_atom(Atom atom, std::size_t offset) {
    (void)offset;
    const int index = static_cast<int>(mol_.atoms.size());
    const bool chiral = atom.chirality != Chirality::kNone;
    mol_.atoms.push_back(std::move(atom));
    Atom &stored = mol_.atoms.back();

    if (prev_ >= 0) {
      make_bond(prev_, index, pending_.order, pending_.direction);
      pending_.clear();
      if (mol_.atoms[prev_].chirality != Chirality::kNone) {
        mol_.atoms[prev_].chiral_ref.push_back(index);
      }
      if (chiral) {
        stored.chiral_ref.push_back(prev_);
      }
    }
    // A bracket hydrogen occupies the slot right after the incoming atom
    // (or the first slot when the atom opens a fragment).
    if (chiral && stored.explicit_h.value_or(0) > 0) {
      stored.chiral_ref.push_back(kImplicitHNeighbor);
    }
    prev_ = index;
    atom_in_fragment_ = true;
  }

  void make_bond(int a, int b, std::optional<BondOrder> order,
                 BondDirection direction) {
    for (const Bond &bond : mol_.bonds) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
        fail("duplicate bond", pos_);
      }
    }
    Bond bond;
    bond.a = a;
    bond.b = b;
    bond.order = order.value_or(
        mol_.atoms[a].aromatic && mol_.atoms[b].aromatic ? BondOrder::kAromatic
                                                         : BondOrder::kSingle);
    bond.direction = direction;
    if (direction != BondDirection::kNone &&
        bond.order != BondOrder::kSingle) {
      fail("direction on non-single bond", pos_);
    }
    mol_.bonds.push_back(bond);
    // Chiral reference bookkeeping stays at the call sites: the textual
    // position of a neighbor differs between chain bonds and ring closures.
  }

  void ring_closure(int digit, std::size_t offset) {
    if (prev_ < 0) {
      fail("ring closure with no preceding atom", offset);
    }
    auto it = rings_.find(digit);
    if (it == rings_.end()) {
      RingSlot slot;
      slot.atom = prev_;
      slot.order = pending_.order;
      slot.direction = pending_.direction;
      slot.offset = offset;
      Atom &opener = mol_.atoms[prev_];
      if (opener.chirality != Chirality::kNone) {
        slot.chiral_slot = static_cast<int>(opener.chiral_ref.size());
        opener.chiral_ref.push_back(-2);  // patched on closure
      }
      rings_.emplace(digit, slot);
      pending_.clear();
      return;
    }

    const RingSlot slot = it->second;
    rings_.erase(it);
    if (slot.atom == prev_) {
      fail("ring closure to the same atom", offset);
    }
    std::optional<BondOrder> order = slot.order;
    if (pending_.order.has_value()) {
      if (order.has_value() && *order != *pending_.order) {
        fail("ring closure bond mismatch", offset);
      }
      order = pending_.order;
    }
    BondDirection direction = slot.direction;
    if (pending_.direction != BondDirection::kNone) {
      // The closing annotation is written from the closing atom; flipped it
      // is oriented opener -> closer like the opening annotation.
      const BondDirection as_opener = flipped(pending_.direction);
      if (direction != BondDirection::kNone && direction != as_opener) {
        fail("ring closure direction mismatch", offset);
      }
      direction = as_opener;
    }
    pending_.clear();

    make_bond(slot.atom, prev_, order, direction);
    Atom &closer = mol_.atoms[prev_];
    if (closer.chirality != Chirality::kNone) {
      closer.chiral_ref.push_back(slot.atom);
    }
    if (slot.chiral_slot >= 0) {
      mol_.atoms[slot.atom].chiral_ref[slot.chiral_slot] = prev_;
    }
  }

  void finish() {
    if (!branches_.empty()) {
      fail("unbalanced parenthesis", branches_.back().second);
    }
    if (pending_.active()) {
      fail("dangling bond", pending_.offset);
    }
    if (!rings_.empty()) {
      fail("unmatched ring closure", rings_.begin()->second.offset);
    }
    if (!atom_in_fragment_) {
      fail("empty fragment", text_.size() - 1);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  int prev_ = -1;
  bool atom_in_fragment_ = false;
  PendingBond pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, RingSlot> rings_;
};

}  // namespace

Molecule parse_smiles(std::string_view text) { return Parser(text).run(); }

bool contains_stereo(std::string_view text) {
  return text.find_first_of("/\\@") != std::string_view::npos;
}

}  // namespace rxnaug::smiles
