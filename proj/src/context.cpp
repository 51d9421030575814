#include "smtitp/context.hpp"

#include <algorithm>

namespace smtitp {

namespace {

std::vector<SymId> merge_syms(std::vector<SymId> a, const std::vector<SymId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

LinTerm LinTerm::constant(const Rational& q) {
  LinTerm t;
  t.c = q;
  return t;
}

LinTerm LinTerm::of(TermId t, const Rational& k) {
  LinTerm r;
  if (k != 0) r.mons.emplace_back(t, k);
  return r;
}

void LinTerm::add(const LinTerm& o, const Rational& k) {
  if (k == 0) return;
  std::vector<std::pair<TermId, Rational>> out;
  out.reserve(mons.size() + o.mons.size());
  size_t i = 0, j = 0;
  while (i < mons.size() || j < o.mons.size()) {
    if (j == o.mons.size() || (i < mons.size() && mons[i].first < o.mons[j].first)) {
      out.push_back(std::move(mons[i++]));
    } else if (i == mons.size() || o.mons[j].first < mons[i].first) {
      out.emplace_back(o.mons[j].first, o.mons[j].second * k);
      ++j;
    } else {
      Rational v = mons[i].second + o.mons[j].second * k;
      if (v != 0) out.emplace_back(mons[i].first, v);
      ++i;
      ++j;
    }
  }
  mons = std::move(out);
  c += o.c * k;
}

LinTerm LinTerm::scaled(const Rational& k) const {
  if (k == 0) return LinTerm();
  LinTerm r = *this;
  for (auto& m : r.mons) m.second *= k;
  r.c *= k;
  return r;
}

LinTerm LinTerm::operator+(const LinTerm& o) const {
  LinTerm r = *this;
  r.add(o);
  return r;
}

LinTerm LinTerm::operator-(const LinTerm& o) const {
  LinTerm r = *this;
  r.add(o, -1);
  return r;
}

Rational LinTerm::coeff(TermId t) const {
  for (auto& m : mons)
    if (m.first == t) return m.second;
  return 0;
}

LinTerm LinTerm::linear_part() const {
  LinTerm r = *this;
  r.c = 0;
  return r;
}

Rational LinTerm::primitive_factor() const {
  mpz_class l = c.get_den();
  for (auto& m : mons) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.second.get_den_mpz_t());
  mpz_class g = 0;
  auto acc = [&](const Rational& q) {
    if (q == 0) return;
    Rational v = q * l;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
  };
  for (auto& m : mons) acc(m.second);
  acc(c);
  if (g == 0) return 1;
  return Rational(l) / Rational(g);
}

bool normalize_clause(Clause& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i].atom() == c[i - 1].atom()) return false;
  return true;
}

bool clause_has(const Clause& c, Lit l) { return std::binary_search(c.begin(), c.end(), l); }

Context::Context() {
  sorts_ = {"Bool", "Real", "Int"};
}

SortId Context::declare_sort(const std::string& name) {
  if (find_sort(name)) throw Error("sort '" + name + "' already declared");
  sorts_.push_back(name);
  return static_cast<SortId>(sorts_.size() - 1);
}

std::optional<SortId> Context::find_sort(const std::string& name) const {
  for (size_t i = 0; i < sorts_.size(); ++i)
    if (sorts_[i] == name) return static_cast<SortId>(i);
  return std::nullopt;
}

SymId Context::declare_fun(const std::string& name, std::vector<SortId> args, SortId ret, int label) {
  if (sym_index_.count(name)) throw Error("symbol '" + name + "' already declared");
  syms_.push_back(Symbol{name, std::move(args), ret, label});
  SymId id = static_cast<SymId>(syms_.size() - 1);
  sym_index_[name] = id;
  return id;
}

std::optional<SymId> Context::find_symbol(const std::string& name) const {
  auto it = sym_index_.find(name);
  if (it == sym_index_.end()) return std::nullopt;
  return it->second;
}

SymId Context::fresh_symbol(const std::string& prefix, SortId ret, int label) {
  std::string name;
  do {
    name = prefix + "!" + std::to_string(++fresh_counter_);
  } while (sym_index_.count(name));
  return declare_fun(name, {}, ret, label);
}

TermId Context::intern_term(TermNode n, const std::string& key) {
  auto it = term_index_.find(key);
  if (it != term_index_.end()) return it->second;
  std::vector<SymId> syms;
  if (n.kind == TermKind::Var || n.kind == TermKind::App) syms.push_back(n.sym);
  for (TermId a : n.args) syms = merge_syms(std::move(syms), term_syms_[a]);
  for (auto& m : n.lin.mons) syms = merge_syms(std::move(syms), term_syms_[m.first]);
  terms_.push_back(std::move(n));
  term_syms_.push_back(std::move(syms));
  TermId id = static_cast<TermId>(terms_.size() - 1);
  term_index_[key] = id;
  return id;
}

TermId Context::mk_var(SymId s) {
  if (!syms_[s].args.empty()) throw Error("'" + syms_[s].name + "' is a function, not a variable");
  TermNode n{TermKind::Var, syms_[s].ret, s, {}, 0, {}};
  return intern_term(std::move(n), "v" + std::to_string(s));
}

TermId Context::mk_const(const Rational& q) {
  TermNode n{TermKind::Const, is_integer(q) ? kIntSort : kRealSort, 0, {}, q, {}};
  return intern_term(std::move(n), "c" + q.get_str());
}

TermId Context::mk_app(SymId f, std::vector<TermId> args) {
  const Symbol& sym = syms_[f];
  if (sym.args.size() != args.size())
    throw Error("wrong number of arguments for '" + sym.name + "'");
  if (args.empty()) return mk_var(f);
  for (size_t i = 0; i < args.size(); ++i) {
    SortId want = sym.args[i], got = sort_of(args[i]);
    bool ok = want == got || (is_arith_sort(want) && is_arith_sort(got));
    if (!ok) throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of '" + sym.name + "'");
  }
  std::string key = "a" + std::to_string(f);
  for (TermId a : args) key += "," + std::to_string(a);
  TermNode n{TermKind::App, sym.ret, f, std::move(args), 0, {}};
  return intern_term(std::move(n), key);
}

std::string Context::lin_key(const LinTerm& t) const {
  std::string key;
  for (auto& m : t.mons) key += std::to_string(m.first) + ":" + m.second.get_str() + ",";
  key += ";" + t.c.get_str();
  return key;
}

TermId Context::mk_lin(const LinTerm& t) {
  if (t.mons.empty()) return mk_const(t.c);
  if (t.mons.size() == 1 && t.c == 0 && t.mons[0].second == 1) return t.mons[0].first;
  SortId s = is_integer(t.c) ? kIntSort : kRealSort;
  for (auto& m : t.mons)
    if (sort_of(m.first) != kIntSort || !is_integer(m.second)) s = kRealSort;
  TermNode n{TermKind::Lin, s, 0, {}, 0, t};
  return intern_term(std::move(n), "l" + lin_key(t));
}

LinTerm Context::lin_of(TermId t) const {
  const TermNode& n = terms_[t];
  switch (n.kind) {
    case TermKind::Const: return LinTerm::constant(n.value);
    case TermKind::Lin: return n.lin;
    default: return LinTerm::of(t);
  }
}

AtomId Context::intern_atom(AtomNode n, const std::string& key) {
  auto it = atom_index_.find(key);
  if (it != atom_index_.end()) return it->second;
  std::vector<SymId> syms;
  switch (n.kind) {
    case AtomKind::Bool: syms.push_back(n.sym); break;
    case AtomKind::TEq: syms = merge_syms(term_syms_[n.lhs], term_syms_[n.rhs]); break;
    default:
      for (auto& m : n.lin.mons) syms = merge_syms(std::move(syms), term_syms_[m.first]);
  }
  atoms_.push_back(std::move(n));
  atom_syms_.push_back(std::move(syms));
  AtomId id = static_cast<AtomId>(atoms_.size() - 1);
  atom_index_[key] = id;
  return id;
}

AtomId Context::mk_bool_atom(SymId p) {
  if (syms_[p].ret != kBoolSort || !syms_[p].args.empty())
    throw Error("'" + syms_[p].name + "' is not a Boolean proposition");
  AtomNode n{AtomKind::Bool, p, {}, 0, 0};
  return intern_atom(std::move(n), "b" + std::to_string(p));
}

AtomId Context::mk_leq(const LinTerm& t) {
  AtomNode n{AtomKind::Leq, 0, t, 0, 0};
  return intern_atom(std::move(n), "<=" + lin_key(t));
}

AtomId Context::mk_lt(const LinTerm& t) {
  AtomNode n{AtomKind::Lt, 0, t, 0, 0};
  return intern_atom(std::move(n), "<" + lin_key(t));
}

AtomId Context::mk_eq(const LinTerm& t) {
  LinTerm u = t;
  if (!u.mons.empty() && u.mons[0].second < 0) u = u.scaled(-1);
  else if (u.mons.empty() && u.c < 0) u = u.scaled(-1);
  AtomNode n{AtomKind::Eq, 0, u, 0, 0};
  return intern_atom(std::move(n), "=" + lin_key(u));
}

AtomId Context::mk_teq(TermId a, TermId b) {
  if (a == b) throw Error("trivial equality " + term_str(a));
  if (b < a) std::swap(a, b);
  SortId sa = sort_of(a), sb = sort_of(b);
  if (sa != sb && !(is_arith_sort(sa) && is_arith_sort(sb)))
    throw Error("sort mismatch in equality " + term_str(a) + " = " + term_str(b));
  AtomNode n{AtomKind::TEq, 0, {}, a, b};
  return intern_atom(std::move(n), "t" + std::to_string(a) + "," + std::to_string(b));
}

bool Context::is_arith_atom(AtomId a) const {
  const AtomNode& n = atoms_[a];
  if (n.kind == AtomKind::Bool) return false;
  if (n.kind == AtomKind::TEq) return is_arith_sort(sort_of(n.lhs));
  return true;
}

std::vector<SymId> Context::term_symbols(TermId t) const { return term_syms_[t]; }
std::vector<SymId> Context::atom_symbols(AtomId a) const { return atom_syms_[a]; }

std::string Context::lin_str(const LinTerm& t) const {
  std::vector<std::string> parts;
  for (auto& [id, k] : t.mons) {
    if (k == 1) parts.push_back(term_str(id));
    else parts.push_back("(* " + to_string(k) + " " + term_str(id) + ")");
  }
  if (t.c != 0 || parts.empty()) parts.push_back(to_string(t.c));
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (auto& p : parts) s += " " + p;
  return s + ")";
}

std::string Context::term_str(TermId t) const {
  const TermNode& n = terms_[t];
  switch (n.kind) {
    case TermKind::Var: return syms_[n.sym].name;
    case TermKind::Const: return to_string(n.value);
    case TermKind::Lin: return lin_str(n.lin);
    case TermKind::App: {
      std::string s = "(" + syms_[n.sym].name;
      for (TermId a : n.args) s += " " + term_str(a);
      return s + ")";
    }
  }
  return "?";
}

std::string Context::atom_str(AtomId a) const {
  const AtomNode& n = atoms_[a];
  switch (n.kind) {
    case AtomKind::Bool: return syms_[n.sym].name;
    case AtomKind::Leq: return "(<= 0 " + lin_str(n.lin) + ")";
    case AtomKind::Lt: return "(< 0 " + lin_str(n.lin) + ")";
    case AtomKind::Eq: return "(= 0 " + lin_str(n.lin) + ")";
    case AtomKind::TEq: return "(= " + term_str(n.lhs) + " " + term_str(n.rhs) + ")";
  }
  return "?";
}

std::string Context::lit_str(Lit l) const {
  return l.neg() ? "(not " + atom_str(l.atom()) + ")" : atom_str(l.atom());
}

}  // namespace smtitp
