#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "smtitp/context.hpp"

namespace smtitp {

enum class FKind : uint8_t { True, False, Atom, Not, And, Or, Implies, Iff };

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct FNode {
  FKind kind;
  AtomId atom = 0;
  std::vector<Formula> kids;
};

Formula f_true();
Formula f_false();
Formula f_atom(AtomId a);
Formula f_lit(Lit l);
Formula f_not(const Formula& f);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_and(const Formula& a, const Formula& b);
Formula f_or(const Formula& a, const Formula& b);
Formula f_implies(const Formula& a, const Formula& b);
Formula f_iff(const Formula& a, const Formula& b);
Formula f_clause(const Clause& c);

// folds constant LA atoms to true/false
Formula f_leq(Context& ctx, const LinTerm& t);
Formula f_lt(Context& ctx, const LinTerm& t);
Formula f_eq(Context& ctx, const LinTerm& t);
Formula f_teq(Context& ctx, TermId a, TermId b);

std::string to_string(const Context& ctx, const Formula& f);

void collect_atoms(const Formula& f, std::vector<AtomId>& out);
std::vector<SymId> formula_symbols(const Context& ctx, const Formula& f);

// evaluation under a total assignment of the atoms
bool eval(const Formula& f, const std::vector<bool>& atom_value);

// rewrites every atom through the callback
Formula map_atoms(const Formula& f, const std::function<Formula(AtomId)>& fn);

}  // namespace smtitp
