#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "smtitp/formula.hpp"
#include "smtitp/reader.hpp"

namespace testing_support {

using namespace smtitp;

struct Env {
  Context ctx;
  Reader rd{ctx};

  void decl(const std::string& text) {
    for (auto& e : parse_sexprs(text))
      if (!rd.declaration(e)) throw Error("not a declaration: " + e.str());
  }
  void reals(const std::vector<std::string>& names) {
    for (auto& n : names) ctx.declare_fun(n, {}, kRealSort);
  }
  void ints(const std::vector<std::string>& names) {
    for (auto& n : names) ctx.declare_fun(n, {}, kIntSort);
  }
  Formula f(const std::string& text) { return rd.formula(parse_sexprs(text).at(0)); }
  TermId t(const std::string& text) { return rd.term(parse_sexprs(text).at(0)); }
  Lit lit(const std::string& text) {
    Formula g = f(text);
    if (g->kind == FKind::Atom) return Lit::make(g->atom);
    if (g->kind == FKind::Not && g->kids[0]->kind == FKind::Atom) return Lit::make(g->kids[0]->atom, true);
    throw Error("not a literal: " + text);
  }
  std::string str(const Formula& g) const { return to_string(ctx, g); }
};

}  // namespace testing_support

#include "smtitp/cnf.hpp"
#include "smtitp/dl.hpp"
#include "smtitp/utvpi.hpp"

namespace testing_support {

enum class Th { LA, DL, DLZ, UTVPI, UTVPIZ };

// unsatisfiability of a formula through the lazy loop with one theory hook
inline bool unsat_in(Context& ctx, const Formula& f, Th th) {
  Proof proof;
  Cdcl sat(ctx, proof);
  LaHook la(ctx);
  DlHook dl(ctx, th == Th::DLZ);
  UtvpiHook ut(ctx, th == Th::UTVPIZ);
  auto own = [&](AtomId a) {
    if (!ctx.is_arith_atom(a)) return;
    if (th == Th::LA) la.own(a);
    if (th == Th::DL || th == Th::DLZ) dl.own(a);
    if (th == Th::UTVPI || th == Th::UTVPIZ) ut.own(a);
  };
  if (th == Th::LA) sat.add_hook(&la);
  if (th == Th::DL || th == Th::DLZ) sat.add_hook(&dl);
  if (th == Th::UTVPI || th == Th::UTVPIZ) sat.add_hook(&ut);
  for (auto& c : cnf_convert(ctx, f)) {
    for (Lit l : c) own(l.atom());
    sat.add_input(c, 1);
  }
  return sat.solve() == SatStatus::Unsat;
}

inline Formula conj_lits(const std::vector<Lit>& ls) {
  std::vector<Formula> fs;
  for (Lit l : ls) fs.push_back(f_lit(l));
  return f_and(fs);
}

// Craig conditions for literal sets: A |= I and I & B unsat
inline bool is_interpolant(Context& ctx, const std::vector<Lit>& a, const std::vector<Lit>& b, const Formula& itp,
                           Th th) {
  return unsat_in(ctx, f_and(conj_lits(a), f_not(itp)), th) && unsat_in(ctx, f_and(itp, conj_lits(b)), th);
}

// conjunct strings of a formula, sorted
inline std::vector<std::string> conjuncts(const Context& ctx, const Formula& f) {
  std::vector<std::string> out;
  if (f->kind == FKind::And)
    for (auto& k : f->kids) out.push_back(to_string(ctx, k));
  else
    out.push_back(to_string(ctx, f));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testing_support
