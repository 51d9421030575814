#include "smtitp/partition.hpp"

namespace smtitp {

const char* side_name(Side s) {
  switch (s) {
    case Side::A: return "A";
    case Side::B: return "B";
    default: return "mixed";
  }
}

Partition::Partition(int nparts) : nparts_(nparts) {
  if (nparts < 1 || nparts > 64) throw Error("number of parts must be between 1 and 64");
}

uint64_t Partition::a_mask(int k) const {
  if (k >= 64) return ~uint64_t(0);
  return (uint64_t(1) << k) - 1;
}

uint64_t Partition::b_mask(int k) const { return ~a_mask(k); }

void Partition::note_atom(const Context& ctx, AtomId a, int part) {
  if (part < 1 || part > nparts_) throw Error("part index out of range");
  uint64_t bit = uint64_t(1) << (part - 1);
  if (atom_mask_.size() <= a) atom_mask_.resize(a + 1, 0);
  atom_mask_[a] |= bit;
  for (SymId s : ctx.atom_symbols(a)) {
    if (sym_mask_.size() <= s) sym_mask_.resize(s + 1, 0);
    sym_mask_[s] |= bit;
  }
}

void Partition::note_clause(const Context& ctx, const Clause& c, int part) {
  for (Lit l : c) note_atom(ctx, l.atom(), part);
}

void Partition::note_formula(const Context& ctx, const Formula& f, int part) {
  std::vector<AtomId> atoms;
  collect_atoms(f, atoms);
  for (AtomId a : atoms) note_atom(ctx, a, part);
}

bool Partition::syms_preceq_A(const std::vector<SymId>& syms, int k) const {
  for (SymId s : syms)
    if (!sym_in_A(s, k)) return false;
  return true;
}

bool Partition::syms_preceq_B(const std::vector<SymId>& syms, int k) const {
  for (SymId s : syms)
    if (!sym_in_B(s, k)) return false;
  return true;
}

bool Partition::formula_common(const Context& ctx, const Formula& f, int k) const {
  auto syms = formula_symbols(ctx, f);
  return syms_preceq_A(syms, k) && syms_preceq_B(syms, k);
}

Side Partition::atom_side(const Context& ctx, AtomId a, int k) const {
  uint64_t m = atom_mask(a);
  if (m & b_mask(k)) return Side::B;
  if (m & a_mask(k)) return Side::A;
  auto it = assigned_.find({a, k});
  if (it != assigned_.end()) return it->second;
  auto syms = ctx.atom_symbols(a);
  if (syms_preceq_B(syms, k)) return Side::B;
  if (syms_preceq_A(syms, k)) return Side::A;
  return Side::Mixed;
}

void Partition::assign_side(const Context& ctx, AtomId a, int k, Side s) {
  auto syms = ctx.atom_symbols(a);
  bool ok = s == Side::A ? syms_preceq_A(syms, k) : s == Side::B && syms_preceq_B(syms, k);
  if (!ok) throw Error("cannot assign " + ctx.atom_str(a) + " to side " + side_name(s));
  assigned_[{a, k}] = s;
}

Clause Partition::project_B(const Context& ctx, const Clause& c, int k) const {
  Clause out;
  for (Lit l : c)
    if (atom_side(ctx, l.atom(), k) == Side::B) out.push_back(l);
  return out;
}

Clause Partition::project_not_B(const Context& ctx, const Clause& c, int k) const {
  Clause out;
  for (Lit l : c)
    if (atom_side(ctx, l.atom(), k) != Side::B) out.push_back(l);
  return out;
}

}  // namespace smtitp
