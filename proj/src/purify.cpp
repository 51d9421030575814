#include "smtitp/purify.hpp"

namespace smtitp {

bool is_euf_term(const Context& ctx, TermId t) {
  auto k = ctx.term(t).kind;
  return k == TermKind::Var || k == TermKind::App;
}

TermId Purifier::name(TermId t, int label, std::vector<Formula>& defs) {
  auto key = std::make_pair(t, label);
  auto it = names_.find(key);
  if (it != names_.end()) return it->second;
  SortId s = ctx_.sort_of(t) == kIntSort ? kIntSort : kRealSort;
  if (!ctx_.is_arith_sort(ctx_.sort_of(t))) s = ctx_.sort_of(t);
  TermId v = ctx_.mk_var(ctx_.fresh_symbol("v", s, label));
  names_[key] = v;
  Formula def;
  if (ctx_.term(t).kind == TermKind::App) def = f_teq(ctx_, v, euf(t, label, defs));
  else def = f_eq(ctx_, LinTerm::of(v) - arith(ctx_.lin_of(t), label, defs));
  if (def->kind == FKind::Atom) defs_.emplace_back(def->atom, label);
  defs.push_back(def);
  return v;
}

LinTerm Purifier::arith(const LinTerm& t, int label, std::vector<Formula>& defs) {
  LinTerm out = LinTerm::constant(t.c);
  for (auto& [m, k] : t.mons) {
    TermId x = ctx_.term(m).kind == TermKind::App ? name(m, label, defs) : m;
    out.add(LinTerm::of(x), k);
  }
  return out;
}

TermId Purifier::euf(TermId t, int label, std::vector<Formula>& defs) {
  const TermNode& n = ctx_.term(t);
  if (n.kind == TermKind::Var) return t;
  if (n.kind != TermKind::App) return name(t, label, defs);
  std::vector<TermId> args;
  SymId f = n.sym;
  std::vector<TermId> orig = n.args;
  for (TermId a : orig) args.push_back(euf(a, label, defs));
  return ctx_.mk_app(f, std::move(args));
}

Formula Purifier::atom(AtomId a, int label, std::vector<Formula>& defs) {
  AtomNode n = ctx_.atom(a);
  switch (n.kind) {
    case AtomKind::Bool: return f_atom(a);
    case AtomKind::Leq: return f_leq(ctx_, arith(n.lin, label, defs));
    case AtomKind::Lt: return f_lt(ctx_, arith(n.lin, label, defs));
    case AtomKind::Eq: return f_eq(ctx_, arith(n.lin, label, defs));
    case AtomKind::TEq:
      if (is_euf_term(ctx_, n.lhs) && is_euf_term(ctx_, n.rhs))
        return f_teq(ctx_, euf(n.lhs, label, defs), euf(n.rhs, label, defs));
      return f_eq(ctx_, arith(ctx_.lin_of(n.lhs) - ctx_.lin_of(n.rhs), label, defs));
  }
  return f_atom(a);
}

Formula Purifier::purify(const Formula& f, int label) {
  std::vector<Formula> defs;
  Formula g = map_atoms(f, [&](AtomId a) { return atom(a, label, defs); });
  defs.insert(defs.begin(), g);
  return f_and(std::move(defs));
}

}  // namespace smtitp
