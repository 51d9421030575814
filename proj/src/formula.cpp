#include "smtitp/formula.hpp"

#include <algorithm>
#include <functional>

namespace smtitp {

namespace {

Formula make(FKind k, std::vector<Formula> kids = {}, AtomId a = 0) {
  return std::make_shared<const FNode>(FNode{k, a, std::move(kids)});
}

const Formula& true_node() {
  static const Formula t = make(FKind::True);
  return t;
}

const Formula& false_node() {
  static const Formula f = make(FKind::False);
  return f;
}

}  // namespace

Formula f_true() { return true_node(); }
Formula f_false() { return false_node(); }
Formula f_atom(AtomId a) { return make(FKind::Atom, {}, a); }
Formula f_lit(Lit l) { return l.neg() ? f_not(f_atom(l.atom())) : f_atom(l.atom()); }

Formula f_not(const Formula& f) {
  switch (f->kind) {
    case FKind::True: return f_false();
    case FKind::False: return f_true();
    case FKind::Not: return f->kids[0];
    default: return make(FKind::Not, {f});
  }
}

Formula f_and(std::vector<Formula> fs) {
  std::vector<Formula> out;
  for (auto& f : fs) {
    if (f->kind == FKind::False) return f_false();
    if (f->kind == FKind::True) continue;
    if (f->kind == FKind::And) out.insert(out.end(), f->kids.begin(), f->kids.end());
    else out.push_back(f);
  }
  if (out.empty()) return f_true();
  if (out.size() == 1) return out[0];
  return make(FKind::And, std::move(out));
}

Formula f_or(std::vector<Formula> fs) {
  std::vector<Formula> out;
  for (auto& f : fs) {
    if (f->kind == FKind::True) return f_true();
    if (f->kind == FKind::False) continue;
    if (f->kind == FKind::Or) out.insert(out.end(), f->kids.begin(), f->kids.end());
    else out.push_back(f);
  }
  if (out.empty()) return f_false();
  if (out.size() == 1) return out[0];
  return make(FKind::Or, std::move(out));
}

Formula f_and(const Formula& a, const Formula& b) { return f_and(std::vector<Formula>{a, b}); }
Formula f_or(const Formula& a, const Formula& b) { return f_or(std::vector<Formula>{a, b}); }

Formula f_implies(const Formula& a, const Formula& b) {
  if (a->kind == FKind::True) return b;
  if (a->kind == FKind::False || b->kind == FKind::True) return f_true();
  if (b->kind == FKind::False) return f_not(a);
  return make(FKind::Implies, {a, b});
}

Formula f_iff(const Formula& a, const Formula& b) {
  if (a->kind == FKind::True) return b;
  if (b->kind == FKind::True) return a;
  if (a->kind == FKind::False) return f_not(b);
  if (b->kind == FKind::False) return f_not(a);
  return make(FKind::Iff, {a, b});
}

Formula f_clause(const Clause& c) {
  std::vector<Formula> fs;
  for (Lit l : c) fs.push_back(f_lit(l));
  return f_or(std::move(fs));
}

Formula f_leq(Context& ctx, const LinTerm& t) {
  if (t.is_const()) return t.c >= 0 ? f_true() : f_false();
  return f_atom(ctx.mk_leq(t));
}

Formula f_lt(Context& ctx, const LinTerm& t) {
  if (t.is_const()) return t.c > 0 ? f_true() : f_false();
  return f_atom(ctx.mk_lt(t));
}

Formula f_eq(Context& ctx, const LinTerm& t) {
  if (t.is_const()) return t.c == 0 ? f_true() : f_false();
  return f_atom(ctx.mk_eq(t));
}

Formula f_teq(Context& ctx, TermId a, TermId b) {
  if (a == b) return f_true();
  return f_atom(ctx.mk_teq(a, b));
}

std::string to_string(const Context& ctx, const Formula& f) {
  auto nary = [&](const char* op) {
    std::string s = std::string("(") + op;
    for (auto& k : f->kids) s += " " + to_string(ctx, k);
    return s + ")";
  };
  switch (f->kind) {
    case FKind::True: return "true";
    case FKind::False: return "false";
    case FKind::Atom: return ctx.atom_str(f->atom);
    case FKind::Not: return nary("not");
    case FKind::And: return nary("and");
    case FKind::Or: return nary("or");
    case FKind::Implies: return nary("=>");
    case FKind::Iff: return nary("=");
  }
  return "?";
}

void collect_atoms(const Formula& f, std::vector<AtomId>& out) {
  if (f->kind == FKind::Atom) {
    out.push_back(f->atom);
    return;
  }
  for (auto& k : f->kids) collect_atoms(k, out);
}

std::vector<SymId> formula_symbols(const Context& ctx, const Formula& f) {
  std::vector<AtomId> atoms;
  collect_atoms(f, atoms);
  std::vector<SymId> syms;
  for (AtomId a : atoms) {
    auto s = ctx.atom_symbols(a);
    syms.insert(syms.end(), s.begin(), s.end());
  }
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

bool eval(const Formula& f, const std::vector<bool>& v) {
  switch (f->kind) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::Atom: return v.at(f->atom);
    case FKind::Not: return !eval(f->kids[0], v);
    case FKind::And:
      for (auto& k : f->kids)
        if (!eval(k, v)) return false;
      return true;
    case FKind::Or:
      for (auto& k : f->kids)
        if (eval(k, v)) return true;
      return false;
    case FKind::Implies: return !eval(f->kids[0], v) || eval(f->kids[1], v);
    case FKind::Iff: return eval(f->kids[0], v) == eval(f->kids[1], v);
  }
  return false;
}

Formula map_atoms(const Formula& f, const std::function<Formula(AtomId)>& fn) {
  std::vector<Formula> kids;
  switch (f->kind) {
    case FKind::True:
    case FKind::False: return f;
    case FKind::Atom: return fn(f->atom);
    case FKind::Not: return f_not(map_atoms(f->kids[0], fn));
    default: break;
  }
  for (auto& k : f->kids) kids.push_back(map_atoms(k, fn));
  switch (f->kind) {
    case FKind::And: return f_and(std::move(kids));
    case FKind::Or: return f_or(std::move(kids));
    case FKind::Implies: return f_implies(kids[0], kids[1]);
    default: return f_iff(kids[0], kids[1]);
  }
}

}  // namespace smtitp
