#include "smtitp/la.hpp"

#include <algorithm>
#include <sstream>

namespace smtitp {

namespace {

const Lit kProbe = Lit::make(0x3ffffffe);

bool arith_teq(const Context& ctx, AtomId a) {
  const AtomNode& n = ctx.atom(a);
  return n.kind == AtomKind::TEq && ctx.is_arith_sort(ctx.sort_of(n.lhs));
}

Formula ineq_formula(Context& ctx, LinTerm t, const Rational& e, bool primitive) {
  if (e > 0) throw Error("interpolant with a positive infinitesimal");
  if (primitive && !t.is_const()) t = t.scaled(t.primitive_factor());
  return e < 0 ? f_lt(ctx, t) : f_leq(ctx, t);
}

}  // namespace

LinTerm la_eq_term(const Context& ctx, AtomId a) {
  const AtomNode& n = ctx.atom(a);
  if (n.kind == AtomKind::Eq) return n.lin;
  if (n.kind == AtomKind::TEq) return ctx.lin_of(n.lhs) - ctx.lin_of(n.rhs);
  throw Error("not an equality: " + ctx.atom_str(a));
}

bool la_is_diseq(const Context& ctx, Lit l) {
  if (!l.neg()) return false;
  const AtomNode& n = ctx.atom(l.atom());
  return n.kind == AtomKind::Eq || arith_teq(ctx, l.atom());
}

std::optional<LaLeaf> la_leaf(const Context& ctx, Lit l, int dir) {
  const AtomNode& n = ctx.atom(l.atom());
  LaLeaf h;
  h.lit = l;
  switch (n.kind) {
    case AtomKind::Leq:
      h.t = l.neg() ? -n.lin : n.lin;
      h.e = l.neg() ? -1 : 0;
      return h;
    case AtomKind::Lt:
      h.t = l.neg() ? -n.lin : n.lin;
      h.e = l.neg() ? 0 : -1;
      return h;
    case AtomKind::Eq:
    case AtomKind::TEq:
      if (l.neg() || (n.kind == AtomKind::TEq && !arith_teq(ctx, l.atom()))) return std::nullopt;
      h.dir = dir;
      h.from_eq = true;
      h.t = la_eq_term(ctx, l.atom()).scaled(dir);
      h.e = 0;
      return h;
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------- LaProof

int LaProof::add_leaf(LaLeaf h) {
  Node n;
  n.hyp = std::move(h);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

int LaProof::add_comb(int l, int r, Rational c1, Rational c2) {
  if (c1 <= 0 || (r >= 0 && c2 <= 0)) throw Error("Comb needs positive coefficients");
  Node n;
  n.leaf = false;
  n.l = l;
  n.r = r;
  n.c1 = std::move(c1);
  n.c2 = std::move(c2);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

std::pair<LinTerm, Rational> LaProof::eval(int i, const std::function<bool(const LaLeaf&)>& zero) const {
  const Node& n = nodes_[i];
  if (n.leaf) {
    if (zero && zero(n.hyp)) return {LinTerm(), Rational(0)};
    return {n.hyp.t, n.hyp.e};
  }
  auto [lt, le] = eval(n.l, zero);
  LinTerm t = lt.scaled(n.c1);
  Rational e = le * n.c1;
  if (n.r >= 0) {
    auto [rt, re] = eval(n.r, zero);
    t.add(rt, n.c2);
    e += re * n.c2;
  }
  return {t, e};
}

std::vector<Lit> LaProof::leaves() const {
  std::vector<Lit> out;
  for (auto& n : nodes_)
    if (n.leaf && std::find(out.begin(), out.end(), n.hyp.lit) == out.end()) out.push_back(n.hyp.lit);
  return out;
}

std::string LaProof::str(const Context& ctx) const {
  std::function<std::string(int)> rec = [&](int i) -> std::string {
    const Node& n = nodes_[i];
    if (n.leaf) {
      std::string a = n.hyp.lit == kProbe ? "probe" : ctx.lit_str(n.hyp.lit);
      if (n.hyp.from_eq) return "(leqeq " + a + " " + std::to_string(n.hyp.dir) + ")";
      return "(hyp " + a + ")";
    }
    std::string s = "(comb " + to_string(n.c1) + " " + rec(n.l);
    if (n.r >= 0) s += " " + to_string(n.c2) + " " + rec(n.r);
    return s + ")";
  };
  return root_ < 0 ? "()" : rec(root_);
}

// ---------------------------------------------------------------- LaSolver

LaSolver::LaSolver(const Context& ctx) : ctx_(ctx) {}

bool LaSolver::before(int u, int v) const {
  const Var& a = vars_[u];
  const Var& b = vars_[v];
  if (a.slack != b.slack) return a.slack;
  if (a.slack) return a.created < b.created;
  return a.term > b.term;
}

int LaSolver::original(TermId t) {
  auto it = orig_.find(t);
  if (it != orig_.end()) return it->second;
  Var v;
  v.term = t;
  vars_.push_back(v);
  rows_.emplace_back();
  int id = static_cast<int>(vars_.size() - 1);
  orig_[t] = id;
  return id;
}

int LaSolver::slack_for(const LinTerm& lin, Rational& k) {
  // one slack per linear part up to scaling; it is defined by the first term seen
  const Rational& lead = lin.mons.front().second;
  std::vector<std::pair<TermId, Rational>> key;
  for (auto& [t, c] : lin.mons) key.emplace_back(t, c / lead);
  auto it = slack_index_.find(key);
  if (it != slack_index_.end()) {
    k = lead / it->second.second;
    return it->second.first;
  }
  k = 1;
  std::map<int, Rational> row;
  for (auto& [t, c] : lin.mons) {
    int x = original(t);
    if (vars_[x].basic) {
      for (auto& [y, a] : rows_[x]) {
        Rational& r = row[y];
        r += c * a;
        if (r == 0) row.erase(y);
      }
    } else {
      Rational& r = row[x];
      r += c;
      if (r == 0) row.erase(x);
    }
  }
  Var v;
  v.slack = true;
  v.created = slack_count_++;
  v.basic = true;
  for (auto& [y, a] : row) v.beta += vars_[y].beta * a;
  vars_.push_back(v);
  rows_.push_back(std::move(row));
  int id = static_cast<int>(vars_.size() - 1);
  slack_index_[key] = {id, lead};
  return id;
}

bool LaSolver::assert_lit(Lit l) {
  lit_marks_.push_back(Mark{undo_.size(), diseqs_.size()});
  if (clash_at_ != SIZE_MAX) return false;
  if (la_is_diseq(ctx_, l)) {
    diseqs_.push_back(l);
    return true;
  }
  auto leaf = la_leaf(ctx_, l, 1);
  if (!leaf) throw Error("not an arithmetic literal: " + ctx_.lit_str(l));
  bool ok = assert_leaf(*leaf);
  if (ok && leaf->from_eq) ok = assert_leaf(*la_leaf(ctx_, l, -1));
  if (!ok) {
    clash_at_ = lit_marks_.size() - 1;
    clash_ = conflict_;
    clash_proof_ = proof_;
  }
  return ok;
}

bool LaSolver::assert_leaf(const LaLeaf& leaf) {
  if (leaf.t.is_const()) {
    if (Delta(leaf.t.c, leaf.e) < Delta(0)) {
      proof_ = LaProof();
      proof_.set_root(proof_.add_comb(proof_.add_leaf(leaf), -1, 1, 0));
      conflict_ = {leaf.lit};
      conflict_proof_ok_ = true;
      return false;
    }
    return true;
  }
  Rational k;
  int s = slack_for(leaf.t, k);
  Delta val(-leaf.t.c / k, -leaf.e / k);
  return set_bound(s, k < 0, val, leaf, k);
}

bool LaSolver::set_bound(int v, bool upper, const Delta& val, const LaLeaf& src, const Rational& k) {
  Var& x = vars_[v];
  Bound& b = upper ? x.hi : x.lo;
  if (b.set && (upper ? b.v <= val : b.v >= val)) return true;
  const Bound& other = upper ? x.lo : x.hi;
  if (other.set && (upper ? val < other.v : val > other.v)) {
    proof_ = LaProof();
    int l = proof_.add_leaf(src);
    int r = proof_.add_leaf(other.src);
    proof_.set_root(proof_.add_comb(l, r, 1 / abs(k), 1 / abs(other.k)));
    conflict_ = {src.lit};
    if (other.src.lit != src.lit) conflict_.push_back(other.src.lit);
    conflict_proof_ok_ = true;
    return false;
  }
  undo_.push_back(Undo{v, upper, b});
  b.set = true;
  b.v = val;
  b.src = src;
  b.k = k;
  if (!x.basic && (upper ? x.beta > val : x.beta < val)) update(v, val);
  return true;
}

void LaSolver::restore(size_t size) {
  while (undo_.size() > size) {
    Undo& u = undo_.back();
    (u.upper ? vars_[u.var].hi : vars_[u.var].lo) = u.old;
    undo_.pop_back();
  }
}

void LaSolver::backtrack(size_t keep) {
  if (keep >= lit_marks_.size()) return;
  if (clash_at_ != SIZE_MAX && clash_at_ >= keep) clash_at_ = SIZE_MAX;
  restore(lit_marks_[keep].undo);
  diseqs_.resize(lit_marks_[keep].diseqs);
  lit_marks_.resize(keep);
}

void LaSolver::update(int x, const Delta& val) {
  Delta d = val - vars_[x].beta;
  for (size_t b = 0; b < vars_.size(); ++b) {
    if (!vars_[b].basic) continue;
    auto it = rows_[b].find(x);
    if (it != rows_[b].end()) vars_[b].beta += d * it->second;
  }
  vars_[x].beta = val;
}

void LaSolver::pivot(int xi, int xj) {
  std::map<int, Rational> row = std::move(rows_[xi]);
  rows_[xi].clear();
  Rational aij = row.at(xj);
  row.erase(xj);
  std::map<int, Rational> nrow;
  nrow[xi] = 1 / aij;
  for (auto& [y, a] : row) nrow[y] = -a / aij;
  for (size_t b = 0; b < vars_.size(); ++b) {
    if (!vars_[b].basic || static_cast<int>(b) == xi) continue;
    auto it = rows_[b].find(xj);
    if (it == rows_[b].end()) continue;
    Rational c = it->second;
    rows_[b].erase(it);
    for (auto& [y, a] : nrow) {
      Rational& r = rows_[b][y];
      r += c * a;
      if (r == 0) rows_[b].erase(y);
    }
  }
  rows_[xj] = std::move(nrow);
  vars_[xi].basic = false;
  vars_[xj].basic = true;
  ++pivots_;
}

void LaSolver::pivot_and_update(int xi, int xj, const Delta& val) {
  Rational aij = rows_[xi].at(xj);
  Delta theta = (val - vars_[xi].beta) * (1 / aij);
  vars_[xi].beta = val;
  vars_[xj].beta += theta;
  for (size_t b = 0; b < vars_.size(); ++b) {
    if (!vars_[b].basic || static_cast<int>(b) == xi) continue;
    auto it = rows_[b].find(xj);
    if (it != rows_[b].end()) vars_[b].beta += theta * it->second;
  }
  pivot(xi, xj);
}

bool LaSolver::simplex() {
  while (true) {
    int xi = -1;
    bool lower = false;
    for (size_t v = 0; v < vars_.size(); ++v) {
      const Var& x = vars_[v];
      if (!x.basic) continue;
      bool lo = x.lo.set && x.beta < x.lo.v;
      bool hi = x.hi.set && x.beta > x.hi.v;
      if ((lo || hi) && (xi < 0 || before(static_cast<int>(v), xi))) {
        xi = static_cast<int>(v);
        lower = lo;
      }
    }
    if (xi < 0) return true;
    int xj = -1;
    for (auto& [y, a] : rows_[xi]) {
      const Var& v = vars_[y];
      bool up = !v.hi.set || v.beta < v.hi.v;
      bool down = !v.lo.set || v.beta > v.lo.v;
      bool ok = lower ? ((a > 0 && up) || (a < 0 && down)) : ((a < 0 && up) || (a > 0 && down));
      if (ok && (xj < 0 || before(y, xj))) xj = y;
    }
    if (xj < 0) {
      row_conflict(xi, lower);
      return false;
    }
    pivot_and_update(xi, xj, lower ? vars_[xi].lo.v : vars_[xi].hi.v);
  }
}

void LaSolver::row_conflict(int xi, bool lower) {
  std::vector<std::pair<const Bound*, Rational>> pos, neg;
  for (auto& [y, a] : rows_[xi]) {
    const Var& v = vars_[y];
    bool use_hi = lower ? a > 0 : a < 0;
    const Bound& b = use_hi ? v.hi : v.lo;
    if (!b.set) throw Error("row conflict on an unbounded variable");
    (a > 0 ? pos : neg).emplace_back(&b, abs(a) / abs(b.k));
  }
  const Bound& own = lower ? vars_[xi].lo : vars_[xi].hi;
  std::vector<std::pair<const Bound*, Rational>> all = pos;
  all.insert(all.end(), neg.begin(), neg.end());
  all.emplace_back(&own, 1 / abs(own.k));

  proof_ = LaProof();
  conflict_.clear();
  int cur = -1;
  Rational cur_c;
  for (auto& [b, c] : all) {
    int leaf = proof_.add_leaf(b->src);
    if (std::find(conflict_.begin(), conflict_.end(), b->src.lit) == conflict_.end())
      conflict_.push_back(b->src.lit);
    if (cur < 0) {
      cur = leaf;
      cur_c = c;
    } else {
      cur = proof_.add_comb(cur, leaf, cur_c, c);
      cur_c = 1;
    }
  }
  if (proof_.node(cur).leaf) cur = proof_.add_comb(cur, -1, cur_c, 0);
  proof_.set_root(cur);
  conflict_proof_ok_ = true;
  auto [t, e] = proof_.eval(cur);
  if (!t.is_const() || Delta(t.c, e) >= Delta(0)) throw Error("simplex produced a non-refuting combination");
}

bool LaSolver::strict_probe(const LinTerm& t, std::vector<Lit>& out) {
  size_t mark = undo_.size();
  LaLeaf leaf;
  leaf.lit = kProbe;
  leaf.t = t;
  leaf.e = -1;
  bool ok = assert_leaf(leaf) && simplex();
  if (!ok)
    for (Lit l : conflict_)
      if (l != kProbe) out.push_back(l);
  restore(mark);
  return !ok;
}

bool LaSolver::check(bool full) {
  if (clash_at_ != SIZE_MAX) {
    conflict_ = clash_;
    proof_ = clash_proof_;
    conflict_proof_ok_ = true;
    return false;
  }
  conflict_.clear();
  conflict_proof_ok_ = false;
  if (!simplex()) return false;
  if (!full) return true;
  for (Lit d : diseqs_) {
    LinTerm t = la_eq_term(ctx_, d.atom());
    std::vector<Lit> c;
    if (!strict_probe(t, c)) continue;
    if (!strict_probe(-t, c)) continue;
    std::vector<Lit> confl;
    for (Lit l : c)
      if (std::find(confl.begin(), confl.end(), l) == confl.end()) confl.push_back(l);
    confl.push_back(d);
    conflict_ = std::move(confl);
    conflict_proof_ok_ = false;
    return false;
  }
  return true;
}

bool LaSolver::entails_eq(const LinTerm& a, const LinTerm& b, std::vector<Lit>& because) {
  if (clash_at_ != SIZE_MAX) return false;
  LinTerm t = a - b;
  std::vector<Lit> c;
  if (!strict_probe(t, c) || !strict_probe(-t, c)) return false;
  because.clear();
  for (Lit l : c)
    if (std::find(because.begin(), because.end(), l) == because.end()) because.push_back(l);
  return true;
}

Delta LaSolver::value_of(TermId t) const {
  auto it = orig_.find(t);
  return it == orig_.end() ? Delta(0) : vars_[it->second].beta;
}

std::map<TermId, Rational> LaSolver::model() const {
  Rational delta = 1;
  for (const Var& x : vars_) {
    if (x.lo.set && x.lo.v.r < x.beta.r && x.lo.v.e > x.beta.e)
      delta = std::min(delta, Rational((x.beta.r - x.lo.v.r) / (x.lo.v.e - x.beta.e)));
    if (x.hi.set && x.beta.r < x.hi.v.r && x.beta.e > x.hi.v.e)
      delta = std::min(delta, Rational((x.hi.v.r - x.beta.r) / (x.beta.e - x.hi.v.e)));
  }
  delta /= 2;
  std::map<TermId, Rational> m;
  for (auto& [t, v] : orig_) m[t] = vars_[v].beta.r + vars_[v].beta.e * delta;
  if (diseqs_.empty()) return m;

  // move off the hyperplanes of the disequalities
  auto zero_on = [&](const std::map<TermId, Rational>& p) {
    for (Lit d : diseqs_) {
      LinTerm t = la_eq_term(ctx_, d.atom());
      Rational s = t.c;
      for (auto& [x, c] : t.mons) {
        auto it = p.find(x);
        if (it != p.end()) s += c * it->second;
      }
      if (s == 0) return true;
    }
    return false;
  };
  if (!zero_on(m)) return m;
  std::vector<std::map<TermId, Rational>> witnesses;
  // every active bound source
  std::vector<LaLeaf> leaves;
  for (const Var& x : vars_) {
    if (x.lo.set) leaves.push_back(x.lo.src);
    if (x.hi.set) leaves.push_back(x.hi.src);
  }
  for (Lit d : diseqs_) {
    LinTerm t = la_eq_term(ctx_, d.atom());
    for (int sign : {1, -1}) {
      LaSolver s(ctx_);
      bool ok = true;
      for (auto& l : leaves) ok = ok && s.assert_leaf(l);
      LaLeaf g;
      g.lit = kProbe;
      g.t = t.scaled(sign);
      g.e = -1;
      ok = ok && s.assert_leaf(g) && s.simplex();
      if (ok) {
        auto w = s.model();
        witnesses.push_back(w);
        break;
      }
    }
  }
  for (int attempt = 1; attempt < 64; ++attempt) {
    std::map<TermId, Rational> p = m;
    Rational total = 1;
    for (size_t i = 0; i < witnesses.size(); ++i) {
      Rational w(1, attempt * static_cast<int>(i + 2) + static_cast<int>(i * i) + 1);
      total += w;
      for (auto& [x, v] : p) {
        auto it = witnesses[i].find(x);
        v += w * (it == witnesses[i].end() ? Rational(0) : it->second);
      }
    }
    for (auto& [x, v] : p) v /= total;
    if (!zero_on(p)) return p;
  }
  return m;
}

bool LaSolver::invariant_ok() const {
  for (size_t v = 0; v < vars_.size(); ++v) {
    const Var& x = vars_[v];
    if (x.basic) {
      Delta s;
      for (auto& [y, a] : rows_[v]) {
        if (vars_[y].basic) return false;
        s += vars_[y].beta * a;
      }
      if (s != x.beta) return false;
    } else {
      if (x.lo.set && x.beta < x.lo.v) return false;
      if (x.hi.set && x.beta > x.hi.v) return false;
    }
  }
  return true;
}

std::string LaSolver::tableau_str() const {
  auto name = [&](int v) {
    if (vars_[v].slack) return "s" + std::to_string(vars_[v].created + 1);
    return ctx_.term_str(vars_[v].term);
  };
  std::ostringstream out;
  for (size_t v = 0; v < vars_.size(); ++v) {
    if (!vars_[v].basic) continue;
    out << name(static_cast<int>(v)) << " =";
    for (auto& [y, a] : rows_[v]) out << " " << to_string(a) << "*" << name(y);
    out << "\n";
  }
  return out.str();
}

std::string LaSolver::bounds_str() const {
  std::ostringstream out;
  for (size_t v = 0; v < vars_.size(); ++v) {
    const Var& x = vars_[v];
    std::string name = x.slack ? "s" + std::to_string(x.created + 1) : ctx_.term_str(x.term);
    if (x.lo.set) out << to_string(x.lo.v) << " <= " << name << "\n";
    if (x.hi.set) out << name << " <= " << to_string(x.hi.v) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- interpolation

Formula la_interpolate_proof(Context& ctx, const LaProof& p, const std::function<Side(Lit)>& side,
                             const LaItpOptions& opt) {
  auto in_b = [&](const LaLeaf& h) { return side(h.lit) == Side::B; };
  if (!opt.strengthen) {
    auto [t, e] = p.eval(p.root(), in_b);
    return ineq_formula(ctx, t, e, opt.primitive);
  }

  // variables that must be summed away: in some A leaf, in no B leaf
  std::set<TermId> in_a, in_bvars;
  for (size_t i = 0; i < p.size(); ++i) {
    const auto& n = p.node(static_cast<int>(i));
    if (!n.leaf) continue;
    auto& dst = in_b(n.hyp) ? in_bvars : in_a;
    for (auto& m : n.hyp.t.mons) dst.insert(m.first);
  }
  std::set<TermId> local;
  for (TermId x : in_a)
    if (!in_bvars.count(x)) local.insert(x);

  struct Pair {
    Rational c;
    LinTerm t;
    Rational e;
    bool merged;
  };
  std::function<std::vector<Pair>(int)> rec = [&](int i) -> std::vector<Pair> {
    const auto& n = p.node(i);
    if (n.leaf) {
      if (in_b(n.hyp)) return {};
      return {Pair{1, n.hyp.t, n.hyp.e, false}};
    }
    std::vector<Pair> l = rec(n.l);
    for (auto& q : l) q.c *= n.c1;
    if (n.r >= 0) {
      std::vector<Pair> r = rec(n.r);
      for (auto& q : r) q.c *= n.c2;
      l.insert(l.end(), r.begin(), r.end());
    }
    while (true) {
      TermId pick = 0;
      bool found = false;
      for (TermId x : local) {
        int cnt = 0;
        for (auto& q : l)
          if (q.t.coeff(x) != 0) ++cnt;
        if (cnt > 1) {
          pick = x;
          found = true;
          break;
        }
      }
      if (!found) break;
      Pair m{1, LinTerm(), 0, true};
      std::vector<Pair> rest;
      for (auto& q : l) {
        if (q.t.coeff(pick) != 0) {
          m.t.add(q.t, q.c);
          m.e += q.e * q.c;
        } else {
          rest.push_back(q);
        }
      }
      rest.push_back(m);
      l = std::move(rest);
    }
    return l;
  };
  std::vector<Formula> conj;
  for (auto& q : rec(p.root())) {
    LinTerm t = q.t;
    Rational e = q.e;
    if (q.merged && !t.is_const()) {
      Rational f = t.primitive_factor();
      t = t.scaled(f);
      e *= f;
    }
    conj.push_back(ineq_formula(ctx, t, e, opt.primitive));
  }
  return f_and(std::move(conj));
}

std::optional<LaProof> la_refute(const Context& ctx, const std::vector<Lit>& lits) {
  LaSolver s(ctx);
  for (Lit l : lits) {
    if (la_is_diseq(ctx, l)) throw Error("la_refute on a disequality");
    if (!s.assert_lit(l)) return s.conflict_proof();
  }
  if (s.check(false)) return std::nullopt;
  return s.conflict_proof();
}

bool la_unsat(const Context& ctx, const std::vector<Lit>& lits) {
  LaSolver s(ctx);
  for (Lit l : lits)
    if (!s.assert_lit(l)) return true;
  return !s.check(true);
}

Formula la_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides,
                       const LaItpOptions& opt) {
  std::map<Lit, Side> side_of;
  std::vector<Lit> base;
  std::vector<std::pair<Lit, Side>> diseqs;
  for (size_t i = 0; i < eta.size(); ++i) {
    side_of.emplace(eta[i], sides[i]);
    if (la_is_diseq(ctx, eta[i])) diseqs.emplace_back(eta[i], sides[i]);
    else base.push_back(eta[i]);
  }
  auto side = [&](Lit l) {
    auto it = side_of.find(l);
    if (it == side_of.end()) throw Error("literal without a side in LA interpolation");
    return it->second;
  };
  if (auto p = la_refute(ctx, base)) return la_interpolate_proof(ctx, *p, side, opt);
  for (auto& [d, ds] : diseqs) {
    LinTerm t = la_eq_term(ctx, d.atom());
    Lit g = Lit::make(ctx.mk_lt(t));
    Lit l = Lit::make(ctx.mk_lt(-t));
    std::vector<Lit> plus = base, minus = base;
    plus.push_back(g);
    minus.push_back(l);
    auto pp = la_refute(ctx, plus);
    if (!pp) continue;
    auto pm = la_refute(ctx, minus);
    if (!pm) continue;
    auto split_side = [&, g = g, l = l, ds = ds](Lit x) { return (x == g || x == l) ? ds : side(x); };
    Formula ip = la_interpolate_proof(ctx, *pp, split_side, opt);
    Formula im = la_interpolate_proof(ctx, *pm, split_side, opt);
    return ds == Side::A ? f_or(ip, im) : f_and(ip, im);
  }
  throw Error("LA lemma is not inconsistent");
}

std::optional<LinTerm> la_interpolating_term(Context& ctx, const LinTerm& a, const LinTerm& b,
                                             const std::vector<Lit>& mu, const std::vector<Side>& sides) {
  std::vector<Lit> a_part, b_part;
  for (size_t i = 0; i < mu.size(); ++i) (sides[i] == Side::B ? b_part : a_part).push_back(mu[i]);
  auto entails_eq = [&](const std::vector<Lit>& lits, const LinTerm& x, const LinTerm& y) {
    LinTerm d = x - y;
    if (d.is_const()) return d.c == 0;
    std::vector<Lit> p = lits, q = lits;
    p.push_back(Lit::make(ctx.mk_lt(d)));
    q.push_back(Lit::make(ctx.mk_lt(-d)));
    return la_unsat(ctx, p) && la_unsat(ctx, q);
  };
  std::vector<LinTerm> candidates;
  for (int sign : {1, -1}) {
    LinTerm diff = (b - a).scaled(sign);
    if (diff.is_const()) continue;
    Lit special = Lit::make(ctx.mk_lt(diff));
    std::vector<Lit> lits;
    for (Lit l : mu)
      if (!la_is_diseq(ctx, l)) lits.push_back(l);
    lits.push_back(special);
    auto p = la_refute(ctx, lits);
    if (!p) continue;
    // accumulated multiplier of every leaf
    std::vector<Rational> w(p->size());
    w[p->root()] = 1;
    for (int i = p->root(); i >= 0; --i) {
      const auto& n = p->node(i);
      if (n.leaf || w[i] == 0) continue;
      w[n.l] += w[i] * n.c1;
      if (n.r >= 0) w[n.r] += w[i] * n.c2;
    }
    LinTerm pa;
    Rational cs = 0;
    std::set<Lit> a_set(a_part.begin(), a_part.end());
    for (size_t i = 0; i < p->size(); ++i) {
      const auto& n = p->node(static_cast<int>(i));
      if (!n.leaf || w[i] == 0) continue;
      if (n.hyp.lit == special) cs += w[i];
      else if (a_set.count(n.hyp.lit)) pa.add(n.hyp.t, w[i]);
    }
    if (cs == 0) continue;
    candidates.push_back(a - pa.scaled(1 / cs));
    candidates.push_back(a + pa.scaled(1 / cs));
  }
  for (auto& t : candidates)
    if (entails_eq(a_part, a, t) && entails_eq(b_part, t, b)) return t;
  return std::nullopt;
}

// ---------------------------------------------------------------- hook

void LaHook::assert_lit(Lit l) { solver_.assert_lit(l); }

void LaHook::backtrack(size_t keep) { solver_.backtrack(keep); }

bool LaHook::check(bool final_check, std::vector<Lit>& conflict) {
  if (!solver_.check(final_check)) {
    conflict = solver_.conflict();
    return false;
  }
  return true;
}

void LaHook::implied(const std::function<bool(AtomId)>& open, std::vector<Implication>& out) {
  for (AtomId a : ie_atoms_) {
    if (!open(a)) continue;
    const AtomNode& n = ctx_.atom(a);
    std::vector<Lit> because;
    if (solver_.entails_eq(ctx_.lin_of(n.lhs), ctx_.lin_of(n.rhs), because))
      out.push_back(Implication{Lit::make(a), because});
  }
}

}  // namespace smtitp
