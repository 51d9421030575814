#pragma once

#include <map>
#include <utility>
#include <vector>

#include "smtitp/formula.hpp"

namespace smtitp {

// Tseitin conversion. Auxiliary propositions are fresh per label, so atoms
// introduced for different partitions never coincide.
class CnfConverter {
 public:
  explicit CnfConverter(Context& ctx) : ctx_(ctx) {}

  void add(const Formula& f, int label, std::vector<Clause>& out);
  const std::vector<std::pair<AtomId, int>>& aux_atoms() const { return aux_; }
  bool is_aux(AtomId a) const;

 private:
  Formula nnf(const Formula& f, bool neg);
  Lit encode(const Formula& f, int label, std::vector<Clause>& out);
  void emit(Clause c, std::vector<Clause>& out);

  Context& ctx_;
  std::map<std::pair<const FNode*, int>, Lit> memo_;
  std::vector<Formula> keep_;
  std::vector<std::pair<AtomId, int>> aux_;
};

std::vector<Clause> cnf_convert(Context& ctx, const Formula& f, int label = 1);

// Atoms are already propositional variables: the abstraction is the identity on ids.
struct BoolAbstraction {
  static AtomId to_prop(AtomId a) { return a; }
  static AtomId to_atom(AtomId p) { return p; }
  // theory literals of a propositional model, skipping Boolean atoms
  static std::vector<Lit> refine(const Context& ctx, const std::vector<int8_t>& model);
};

}  // namespace smtitp
