#include "smtitp/cnf.hpp"

namespace smtitp {

Formula CnfConverter::nnf(const Formula& f, bool neg) {
  switch (f->kind) {
    case FKind::True: return neg ? f_false() : f_true();
    case FKind::False: return neg ? f_true() : f_false();
    case FKind::Atom: return neg ? f_not(f) : f;
    case FKind::Not: return nnf(f->kids[0], !neg);
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> kids;
      for (auto& k : f->kids) kids.push_back(nnf(k, neg));
      bool conj = (f->kind == FKind::And) != neg;
      return conj ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case FKind::Implies: {
      Formula a = nnf(f->kids[0], !neg), b = nnf(f->kids[1], neg);
      return neg ? f_and(a, b) : f_or(a, b);
    }
    case FKind::Iff: return f_iff(nnf(f->kids[0], false), nnf(f->kids[1], neg));
  }
  return f;
}

bool CnfConverter::is_aux(AtomId a) const {
  for (auto& [x, l] : aux_)
    if (x == a) return true;
  return false;
}

void CnfConverter::emit(Clause c, std::vector<Clause>& out) {
  if (normalize_clause(c)) out.push_back(std::move(c));
}

Lit CnfConverter::encode(const Formula& f, int label, std::vector<Clause>& out) {
  if (f->kind == FKind::Atom) return Lit::make(f->atom);
  if (f->kind == FKind::Not && f->kids[0]->kind == FKind::Atom) return Lit::make(f->kids[0]->atom, true);
  auto key = std::make_pair(f.get(), label);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  keep_.push_back(f);

  SymId s = ctx_.fresh_symbol("cnf" + std::to_string(label), kBoolSort, label);
  AtomId a = ctx_.mk_bool_atom(s);
  aux_.emplace_back(a, label);
  Lit x = Lit::make(a);
  memo_[key] = x;

  switch (f->kind) {
    case FKind::True: emit({x}, out); break;
    case FKind::False: emit({~x}, out); break;
    case FKind::And:
    case FKind::Or: {
      bool conj = f->kind == FKind::And;
      Clause big{conj ? x : ~x};
      for (auto& k : f->kids) {
        Lit l = encode(k, label, out);
        if (conj) {
          emit({~x, l}, out);
          big.push_back(~l);
        } else {
          emit({x, ~l}, out);
          big.push_back(l);
        }
      }
      emit(big, out);
      break;
    }
    case FKind::Iff: {
      Lit p = encode(f->kids[0], label, out), q = encode(f->kids[1], label, out);
      emit({~x, ~p, q}, out);
      emit({~x, p, ~q}, out);
      emit({x, p, q}, out);
      emit({x, ~p, ~q}, out);
      break;
    }
    default: throw Error("formula not in negation normal form");
  }
  return x;
}

void CnfConverter::add(const Formula& f, int label, std::vector<Clause>& out) {
  Formula g = nnf(f, false);
  switch (g->kind) {
    case FKind::True: return;
    case FKind::False: out.push_back({}); return;
    case FKind::And:
      for (auto& k : g->kids) add(k, label, out);
      return;
    case FKind::Or: {
      Clause c;
      for (auto& k : g->kids) c.push_back(encode(k, label, out));
      emit(std::move(c), out);
      return;
    }
    case FKind::Iff: {
      Lit p = encode(g->kids[0], label, out), q = encode(g->kids[1], label, out);
      emit({~p, q}, out);
      emit({p, ~q}, out);
      return;
    }
    default: emit({encode(g, label, out)}, out);
  }
}

std::vector<Clause> cnf_convert(Context& ctx, const Formula& f, int label) {
  CnfConverter cnf(ctx);
  std::vector<Clause> out;
  cnf.add(f, label, out);
  return out;
}

std::vector<Lit> BoolAbstraction::refine(const Context& ctx, const std::vector<int8_t>& model) {
  std::vector<Lit> out;
  for (AtomId a = 0; a < model.size() && a < ctx.num_atoms(); ++a) {
    if (model[a] == 0 || ctx.atom(a).kind == AtomKind::Bool) continue;
    out.push_back(Lit::make(a, model[a] < 0));
  }
  return out;
}

}  // namespace smtitp
