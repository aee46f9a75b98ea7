//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/smiles/write.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

namespace rxnaug::smiles {

namespace {

// Parity of the permutation taking `from` to `to` (same distinct elements).
bool odd_permutation(const std::vector<int> &from, const std::vector<int> &to) {
  const std::size_t n = from.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::find(to.begin(), to.end(), from[i]);
    if (it == to.end()) {
      return false;  // inconsistent reference, leave the symbol as stored
    }
    perm[i] = static_cast<std::size_t>(it - to.begin());
  }
  int inversions = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (perm[i] > perm[j]) {
        ++inversions;
      }
    }
  }
  return inversions % 2 == 1;
}

class Writer {
 public:
  Writer(const Molecule &mol, const WritePlan &plan, WriteTrace *trace)
      : mol_(mol), plan_(plan), trace_(trace) {}

  std::string run() {
    validate();
    visited_.assign(mol_.atoms.size(), false);
    children_.assign(mol_.atoms.size(), {});
    ring_close_.assign(mol_.atoms.size(), {});
    ring_open_.assign(mol_.atoms.size(), {});
    std::vector<std::string> fragments;
    for (int root : plan_.roots) {
      survey(root);
      out_.clear();
      emit(root, -1, -1);
      fragments.push_back(out_);
    }
    if (visit_count_ != mol_.atoms.size()) {
      throw std::invalid_argument("write plan does not cover every atom");
    }
    std::string joined;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
      if (i > 0) {
        joined += '.';
      }
      joined += fragments[i];
    }
    return joined;
  }

 private:
  void validate() const {
    if (plan_.neighbor_order.size() != mol_.atoms.size()) {
      throw std::invalid_argument("write plan size mismatch");
    }
    const auto inc = mol_.incidence();
    for (std::size_t i = 0; i < inc.size(); ++i) {
      if (plan_.neighbor_order[i].size() != inc[i].size()) {
        throw std::invalid_argument("write plan neighbor list mismatch");
      }
      std::vector<int> a, b;
      for (const Neighbor &nb : inc[i]) {
        a.push_back(nb.bond);
      }
      for (const Neighbor &nb : plan_.neighbor_order[i]) {
        b.push_back(nb.bond);
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) {
        throw std::invalid_argument("write plan is not a neighbor permutation");
      }
    }
    if (plan_.roots.empty() && !mol_.atoms.empty()) {
      throw std::invalid_argument("write plan has no roots");
    }
  }

  // DFS classifying tree edges and ring (back) edges for one fragment.
  void survey(int root) {
    if (root < 0 || root >= static_cast<int>(mol_.atoms.size())) {
      throw std::invalid_argument("write plan root out of range");
    }
    if (visited_[root]) {
      throw std::invalid_argument("write plan revisits an atom");
    }
    struct Frame {
      int atom;
      int parent_bond;
      std::size_t slot;
    };
    std::vector<Frame> stack = {{root, -1, 0}};
    visited_[root] = true;
    ++visit_count_;
    std::vector<bool> edge_used(mol_.bonds.size(), false);
    while (!stack.empty()) {
      Frame &frame = stack.back();
      if (frame.slot >= plan_.neighbor_order[frame.atom].size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = plan_.neighbor_order[frame.atom][frame.slot++];
      if (nb.bond == frame.parent_bond || edge_used[nb.bond]) {
        continue;
      }
      edge_used[nb.bond] = true;
      if (!visited_[nb.atom]) {
        visited_[nb.atom] = true;
        ++visit_count_;
        children_[frame.atom].push_back(nb);
        stack.push_back({nb.atom, nb.bond, 0});
      } else {
        // Back edge: the digit opens at the earlier-visited endpoint.
        ring_open_[nb.atom].push_back({frame.atom, nb.bond});
        ring_close_[frame.atom].push_back({nb.atom, nb.bond});
      }
    }
  }

  std::string bond_token(int bond_index, int from) {
    const Bond &bond = mol_.bonds[bond_index];
    switch (bond.order) {
      case BondOrder::kDouble:
        return "=";
      case BondOrder::kTriple:
        return "#";
      case BondOrder::kAromatic:
        // Implicit between two aromatic atoms, explicit otherwise.
        return mol_.atoms[bond.a].aromatic && mol_.atoms[bond.b].aromatic
                   ? ""
                   : ":";
      case BondOrder::kSingle:
        break;
    }
    if (bond.direction != BondDirection::kNone) {
      const BondDirection dir =
          from == bond.a ? bond.direction : flipped(bond.direction);
      const char c = dir == BondDirection::kUp ? '/' : '\\';
      if (trace_ != nullptr) {
        trace_->directional.emplace_back(bond_index, c);
      }
      return std::string(1, c);
    }
    // A plain single bond between two aromatic atoms must be explicit.
    if (mol_.atoms[bond.a].aromatic && mol_.atoms[bond.b].aromatic) {
      return "-";
    }
    return "";
  }

  // Neighbor sequence in the exact order a re-parse of the output would
  // record it: parent, bracket hydrogen, ring partners in digit order,
  // then children.
  std::vector<int> output_neighbor_order(int atom, int parent) const {
    std::vector<int> order;
    if (parent >= 0) {
      order.push_back(parent);
    }
    if (mol_.atoms[atom].explicit_h.value_or(0) > 0) {
      order.push_back(kImplicitHNeighbor);
    }
    for (const Neighbor &nb : ring_close_[atom]) {
      order.push_back(nb.atom);
    }
    for (const Neighbor &nb : ring_open_[atom]) {
      order.push_back(nb.atom);
    }
    for (const Neighbor &nb : children_[atom]) {
      order.push_back(nb.atom);
    }
    return order;
  }

  std::string atom_token(int index, int parent) const {
    const Atom &atom = mol_.atoms[index];
    Chirality chirality = atom.chirality;
    if (chirality != Chirality::kNone) {
      const std::vector<int> emitted = output_neighbor_order(index, parent);
      if (emitted.size() == atom.chiral_ref.size() &&
          odd_permutation(atom.chiral_ref, emitted)) {
        chirality = chirality == Chirality::kClockwise
                        ? Chirality::kCounterclockwise
                        : Chirality::kClockwise;
      }
    }

    std::string symbol = atom.element;
    if (atom.aromatic) {
      for (char &c : symbol) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    if (!atom.needs_bracket()) {
      return symbol;
    }
    std::string token = "[";
    if (atom.isotope.has_value()) {
      token += std::to_string(*atom.isotope);
    }
    token += symbol;
    if (chirality == Chirality::kCounterclockwise) {
      token += "@";
    } else if (chirality == Chirality::kClockwise) {
      token += "@@";
    }
    const int hcount = atom.explicit_h.value_or(0);
    if (hcount == 1) {
      token += "H";
    } else if (hcount > 1) {
      token += "H" + std::to_string(hcount);
    }
    if (atom.charge != 0) {
      token += atom.charge > 0 ? "+" : "-";
      const int magnitude = std::abs(atom.charge);
      if (magnitude > 1) {
        token += std::to_string(magnitude);
      }
    }
    token += "]";
    return token;
  }

  std::string digit_token(int digit) const {
    if (digit < 10) {
      return std::to_string(digit);
    }
    if (digit < 100) {
      return "%" + std::to_string(digit);
    }
    throw std::invalid_argument("too many simultaneous ring closures");
  }

  int allocate_digit(int bond) {
    int digit = 1;
    while (digit_owner_.count(digit) > 0) {
      ++digit;
    }
    digit_owner_[digit] = bond;
    bond_digit_[bond] = digit;
    return digit;
  }

  void emit(int atom, int parent, int parent_bond) {
    if (parent_bond >= 0) {
      out_ += bond_token(parent_bond, parent);
    }
    out_ += atom_token(atom, parent);
    for (const Neighbor &nb : ring_close_[atom]) {
      const int digit = bond_digit_.at(nb.bond);
      digit_owner_.erase(digit);
      out_ += digit_token(digit);
    }
    for (const Neighbor &nb : ring_open_[atom]) {
      const int digit = allocate_digit(nb.bond);
      out_ += bond_token(nb.bond, atom);
      out_ += digit_token(digit);
    }
    const auto &kids = children_[atom];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i + 1 < kids.size()) {
        out_ += "(";
        emit(kids[i].atom, atom, kids[i].bond);
        out_ += ")";
      } else {
        emit(kids[i].atom, atom, kids[i].bond);
      }
    }
  }

  const Molecule &mol_;
  const WritePlan &plan_;
  WriteTrace *trace_;
  std::string out_;
  std::size_t visit_count_ = 0;
  std::vector<bool> visited_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> ring_close_;
  std::vector<std::vector<Neighbor>> ring_open_;
  std::map<int, int> digit_owner_;
  std::map<int, int> bond_digit_;
};

}  // namespace

std::string write_smiles(const Molecule &mol, const WritePlan &plan,
                         WriteTrace *trace) {
  if (mol.atoms.empty()) {
    throw std::invalid_argument("cannot write an empty molecule");
  }
  return Writer(mol, plan, trace).run();
}

}  // namespace rxnaug::smiles
