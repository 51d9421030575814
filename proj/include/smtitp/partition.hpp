#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "smtitp/formula.hpp"

namespace smtitp {

enum class Side : uint8_t { A, B, Mixed };

const char* side_name(Side s);

// Occurrence masks over parts 1..n (n <= 64). Cut k puts parts 1..k in A and k+1..n in B.
class Partition {
 public:
  explicit Partition(int nparts = 2);

  int num_parts() const { return nparts_; }
  void note_clause(const Context& ctx, const Clause& c, int part);
  void note_formula(const Context& ctx, const Formula& f, int part);
  void note_atom(const Context& ctx, AtomId a, int part);

  uint64_t atom_mask(AtomId a) const { return a < atom_mask_.size() ? atom_mask_[a] : 0; }
  uint64_t sym_mask(SymId s) const { return s < sym_mask_.size() ? sym_mask_[s] : 0; }
  uint64_t a_mask(int k) const;
  uint64_t b_mask(int k) const;

  bool sym_in_A(SymId s, int k) const { return sym_mask(s) & a_mask(k); }
  bool sym_in_B(SymId s, int k) const { return sym_mask(s) & b_mask(k); }
  bool syms_preceq_A(const std::vector<SymId>& syms, int k) const;
  bool syms_preceq_B(const std::vector<SymId>& syms, int k) const;
  bool formula_common(const Context& ctx, const Formula& f, int k) const;

  // B if the atom occurs in B, A if it occurs in A, otherwise by symbol containment
  Side atom_side(const Context& ctx, AtomId a, int k) const;
  // explicit side for an atom occurring in neither part; AB-mixed atoms are rejected
  void assign_side(const Context& ctx, AtomId a, int k, Side s);

  Clause project_B(const Context& ctx, const Clause& c, int k) const;
  Clause project_not_B(const Context& ctx, const Clause& c, int k) const;

 private:
  int nparts_;
  std::vector<uint64_t> atom_mask_;
  std::vector<uint64_t> sym_mask_;
  std::map<std::pair<AtomId, int>, Side> assigned_;
};

}  // namespace smtitp
