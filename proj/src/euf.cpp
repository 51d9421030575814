#include "smtitp/euf.hpp"

#include <algorithm>

namespace smtitp {

int CongruenceClosure::node(TermId t) {
  auto it = ids_.find(t);
  if (it != ids_.end()) return it->second;
  const TermNode& tn = ctx_.term(t);
  std::vector<int> args;
  if (tn.kind == TermKind::App)
    for (TermId a : tn.args) args.push_back(node(a));
  int id = static_cast<int>(term_.size());
  ids_[t] = id;
  term_.push_back(t);
  rep_.push_back(id);
  members_.push_back({id});
  parents_.emplace_back();
  forest_.push_back(Edge{});
  if (tn.kind == TermKind::App) {
    for (int a : args) parents_[find(a)].push_back(id);
    auto key = std::make_pair(tn.sym, signature(id));
    auto hit = table_.find(key);
    if (hit == table_.end() || signature(hit->second) != key.second) table_[key] = id;
    else pending_.push_back(Pending{id, hit->second, Lit(), id, hit->second});
  }
  return id;
}

int CongruenceClosure::find(int n) const { return rep_[n]; }

std::vector<int> CongruenceClosure::signature(int n) const {
  std::vector<int> s;
  for (TermId a : ctx_.term(term_[n]).args) s.push_back(find(ids_.at(a)));
  return s;
}

void CongruenceClosure::merge(int a, int b, Lit lit, int cu, int cv) {
  pending_.push_back(Pending{a, b, lit, cu, cv});
  process();
}

void CongruenceClosure::process() {
  for (size_t i = 0; i < pending_.size(); ++i) {
    Pending p = pending_[i];
    int ra = find(p.a), rb = find(p.b);
    if (ra == rb) continue;
    // re-root a's tree at a, then hang it below b
    Edge in;
    for (int cur = p.a; cur >= 0;) {
      Edge old = forest_[cur];
      forest_[cur] = in;
      in = old;
      in.to = cur;
      cur = old.to;
    }
    forest_[p.a] = Edge{p.b, p.lit, p.cu, p.cv};

    if (members_[ra].size() > members_[rb].size()) std::swap(ra, rb);
    for (int m : members_[ra]) rep_[m] = rb;
    members_[rb].insert(members_[rb].end(), members_[ra].begin(), members_[ra].end());
    members_[ra].clear();
    for (int q : parents_[ra]) {
      auto key = std::make_pair(ctx_.term(term_[q]).sym, signature(q));
      auto hit = table_.find(key);
      if (hit == table_.end()) {
        table_[key] = q;
      } else if (hit->second != q) {
        int o = hit->second;
        if (signature(o) != key.second) hit->second = q;
        else if (find(o) != find(q)) pending_.push_back(Pending{q, o, Lit(), q, o});
      }
    }
    parents_[rb].insert(parents_[rb].end(), parents_[ra].begin(), parents_[ra].end());
    parents_[ra].clear();
  }
  pending_.clear();
}

void CongruenceClosure::assert_lit(Lit l) {
  const AtomNode& n = ctx_.atom(l.atom());
  if (n.kind != AtomKind::TEq) throw Error("not an equality between terms: " + ctx_.lit_str(l));
  lits_.push_back(l);
  int a = node(n.lhs), b = node(n.rhs);
  process();
  if (l.neg()) diseqs_.push_back({{static_cast<int>(n.lhs), static_cast<int>(n.rhs)}, l});
  else merge(a, b, l, -1, -1);
}

bool CongruenceClosure::check() {
  conflict_.clear();
  for (auto& [ab, l] : diseqs_) {
    int a = ids_.at(ab.first), b = ids_.at(ab.second);
    if (find(a) != find(b)) continue;
    std::set<int> done;
    explain_into(a, b, done, conflict_);
    conflict_.push_back(l);
    return false;
  }
  return true;
}

void CongruenceClosure::replay() {
  std::vector<Lit> lits;
  lits.swap(lits_);
  ids_.clear();
  term_.clear();
  rep_.clear();
  members_.clear();
  parents_.clear();
  forest_.clear();
  table_.clear();
  pending_.clear();
  diseqs_.clear();
  for (Lit l : lits) assert_lit(l);
}

void CongruenceClosure::backtrack(size_t keep) {
  if (keep >= lits_.size()) return;
  lits_.resize(keep);
  replay();
}

bool CongruenceClosure::equal(TermId a, TermId b) {
  int x = node(a), y = node(b);
  process();
  return find(x) == find(y);
}

TermId CongruenceClosure::representative(TermId t) {
  int x = node(t);
  process();
  return term_[find(x)];
}

std::vector<int> CongruenceClosure::forest_path(int a, int b) const {
  std::map<int, size_t> up;
  std::vector<int> from_a;
  for (int x = a; x >= 0; x = forest_[x].to) {
    up[x] = from_a.size();
    from_a.push_back(x);
  }
  std::vector<int> from_b;
  int x = b;
  while (!up.count(x)) {
    from_b.push_back(x);
    x = forest_[x].to;
    if (x < 0) throw Error("terms are not in one congruence class");
  }
  std::vector<int> path(from_a.begin(), from_a.begin() + static_cast<long>(up[x]) + 1);
  path.insert(path.end(), from_b.rbegin(), from_b.rend());
  return path;
}

void CongruenceClosure::explain_into(int a, int b, std::set<int>& done, std::vector<Lit>& out) const {
  auto path = forest_path(a, b);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int x = path[i], y = path[i + 1];
    int c = forest_[x].to == y ? x : y;
    if (!done.insert(c).second) continue;
    const Edge& e = forest_[c];
    if (e.lit.valid()) {
      if (std::find(out.begin(), out.end(), e.lit) == out.end()) out.push_back(e.lit);
      continue;
    }
    const auto& ua = ctx_.term(term_[e.cu]).args;
    const auto& va = ctx_.term(term_[e.cv]).args;
    for (size_t k = 0; k < ua.size(); ++k) explain_into(ids_.at(ua[k]), ids_.at(va[k]), done, out);
  }
}

std::vector<Lit> CongruenceClosure::explain(TermId a, TermId b) {
  if (!equal(a, b)) throw Error("explain: terms are not equal");
  std::vector<Lit> out;
  std::set<int> done;
  explain_into(ids_.at(a), ids_.at(b), done, out);
  return out;
}

EqChain CongruenceClosure::chain(TermId a, TermId b) {
  if (!equal(a, b)) throw Error("chain: terms are not equal");
  EqChain ch;
  auto path = forest_path(ids_.at(a), ids_.at(b));
  for (int x : path) ch.terms.push_back(term_[x]);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int x = path[i], y = path[i + 1];
    const Edge& e = forest_[x].to == y ? forest_[x] : forest_[y];
    ch.steps.push_back(EqStep{term_[x], term_[y], e.lit, !e.lit.valid()});
  }
  return ch;
}

bool euf_unsat(const Context& ctx, const std::vector<Lit>& lits) {
  CongruenceClosure cc(ctx);
  for (Lit l : lits) cc.assert_lit(l);
  return !cc.check();
}

namespace {

struct IPath;

// Chain with every congruence step colored; mixed congruences are split at a shared application.
struct IEdge {
  TermId u, v;
  Side color;  // Mixed: takes the color of the enclosing derivation
  std::vector<IPath> args;
};

struct IPath {
  std::vector<TermId> terms;
  std::vector<IEdge> edges;

  IPath prefix(size_t j) const {
    IPath p;
    p.terms.assign(terms.begin(), terms.begin() + static_cast<long>(j) + 1);
    p.edges.assign(edges.begin(), edges.begin() + static_cast<long>(j));
    return p;
  }
  IPath suffix(size_t j) const {
    IPath p;
    p.terms.assign(terms.begin() + static_cast<long>(j), terms.end());
    p.edges.assign(edges.begin() + static_cast<long>(j), edges.end());
    return p;
  }
};

class Colorer {
 public:
  Colorer(Context& ctx, CongruenceClosure& cc, const std::vector<Lit>& lits, const std::vector<Side>& sides,
          std::function<bool(SymId)> shared = nullptr)
      : ctx_(ctx), cc_(cc), shared_(std::move(shared)) {
    for (size_t i = 0; i < lits.size(); ++i) {
      side_.emplace(lits[i], sides[i]);
      for (SymId s : ctx.atom_symbols(lits[i].atom())) (sides[i] == Side::B ? sb_ : sa_).insert(s);
    }
  }

  bool in_a(TermId t) const { return within(t, sa_); }
  bool in_b(TermId t) const { return within(t, sb_); }
  bool common(TermId t) const { return in_a(t) && in_b(t); }
  Side side(Lit l) const { return side_.at(l); }

  IPath build(TermId a, TermId b) {
    IPath p;
    p.terms.push_back(a);
    if (a == b) return p;
    EqChain ch = cc_.chain(a, b);
    for (auto& st : ch.steps) {
      if (!st.congruence) {
        p.edges.push_back(IEdge{st.u, st.v, side(st.lit), {}});
        p.terms.push_back(st.v);
        continue;
      }
      const auto ua = ctx_.term(st.u).args, va = ctx_.term(st.v).args;
      bool aa = in_a(st.u) && in_a(st.v), bb = in_b(st.u) && in_b(st.v);
      if (aa || bb) {
        IEdge e{st.u, st.v, aa && bb ? Side::Mixed : aa ? Side::A : Side::B, {}};
        for (size_t i = 0; i < ua.size(); ++i) e.args.push_back(build(ua[i], va[i]));
        p.edges.push_back(std::move(e));
        p.terms.push_back(st.v);
        continue;
      }
      // u and v are local to opposite sides: go through f(c) with c shared
      bool u_is_a = in_a(st.u);
      IEdge left{st.u, 0, u_is_a ? Side::A : Side::B, {}};
      IEdge right{0, st.v, u_is_a ? Side::B : Side::A, {}};
      std::vector<TermId> cs;
      for (size_t i = 0; i < ua.size(); ++i) {
        IPath ap = build(ua[i], va[i]);
        size_t n = ap.terms.size();
        std::optional<size_t> j;
        for (size_t k = 0; k < n; ++k) {
          size_t idx = u_is_a ? k : n - 1 - k;
          if (common(ap.terms[idx])) {
            j = idx;
            break;
          }
        }
        if (!j) throw Error("EUF interpolation: argument chain has no shared term");
        cs.push_back(ap.terms[*j]);
        left.args.push_back(ap.prefix(*j));
        right.args.push_back(ap.suffix(*j));
      }
      TermId w = ctx_.mk_app(ctx_.term(st.u).sym, cs);
      left.v = w;
      right.u = w;
      p.edges.push_back(std::move(left));
      p.terms.push_back(w);
      p.edges.push_back(std::move(right));
      p.terms.push_back(st.v);
    }
    return p;
  }

 private:
  bool within(TermId t, const std::set<SymId>& s) const {
    for (SymId x : ctx_.term_symbols(t))
      if (!s.count(x) && !(shared_ && shared_(x))) return false;
    return true;
  }

  Context& ctx_;
  CongruenceClosure& cc_;
  std::function<bool(SymId)> shared_;
  std::map<Lit, Side> side_;
  std::set<SymId> sa_, sb_;
};

// Facts are summaries of producer-colored segments met inside the other side's derivation.
struct FactCollector {
  Context& ctx;
  Side producer;
  std::vector<std::pair<std::vector<Formula>, Formula>> facts;

  void visit(const IPath& p, Side context, std::vector<Formula>* prem) {
    auto eff = [&](const IEdge& e) { return e.color == Side::Mixed ? context : e.color; };
    size_t i = 0;
    while (i < p.edges.size()) {
      Side c = eff(p.edges[i]);
      size_t j = i;
      while (j < p.edges.size() && eff(p.edges[j]) == c) ++j;
      TermId u = p.terms[i], v = p.terms[j];
      if (c == context) {
        for (size_t k = i; k < j; ++k)
          for (auto& a : p.edges[k].args) visit(a, context, prem);
      } else if (c == producer) {
        std::vector<Formula> local;
        for (size_t k = i; k < j; ++k)
          for (auto& a : p.edges[k].args) visit(a, producer, &local);
        if (u != v) facts.push_back({local, f_teq(ctx, u, v)});
      } else {
        if (u != v) prem->push_back(f_teq(ctx, u, v));
        for (size_t k = i; k < j; ++k)
          for (auto& a : p.edges[k].args) visit(a, c, prem);
      }
      i = j;
    }
  }
};

}  // namespace

Formula euf_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides) {
  CongruenceClosure cc(ctx);
  for (Lit l : eta)
    if (!l.neg()) cc.assert_lit(l);
  std::optional<size_t> bad;
  for (size_t i = 0; i < eta.size() && !bad; ++i) {
    if (!eta[i].neg()) continue;
    const AtomNode& n = ctx.atom(eta[i].atom());
    if (n.kind != AtomKind::TEq) throw Error("not an equality between terms: " + ctx.lit_str(eta[i]));
    if (cc.equal(n.lhs, n.rhs)) bad = i;
  }
  if (!bad) throw Error("EUF lemma is not inconsistent");
  Side ds = sides[*bad] == Side::B ? Side::B : Side::A;
  Side producer = ds == Side::B ? Side::A : Side::B;
  std::vector<Side> sd(sides);
  for (auto& s : sd)
    if (s == Side::Mixed) s = Side::A;

  Colorer col(ctx, cc, eta, sd);
  const AtomNode& d = ctx.atom(eta[*bad].atom());
  IPath top = col.build(d.lhs, d.rhs);
  FactCollector fc{ctx, producer, {}};
  fc.visit(top, ds, nullptr);

  if (producer == Side::A) {
    std::vector<Formula> conj;
    for (auto& [prem, eq] : fc.facts) conj.push_back(prem.empty() ? eq : f_implies(f_and(prem), eq));
    return f_and(conj);
  }
  std::vector<Formula> disj;
  for (auto& [prem, eq] : fc.facts) {
    std::vector<Formula> c = prem;
    c.push_back(f_not(eq));
    disj.push_back(f_and(c));
  }
  return f_or(disj);
}

std::optional<TermId> euf_interpolating_term(Context& ctx, TermId a, TermId b, const std::vector<Lit>& mu,
                                             const std::vector<Side>& sides,
                                             const std::function<bool(SymId)>& shared) {
  CongruenceClosure cc(ctx);
  std::vector<Lit> pos;
  std::vector<Side> pos_sides;
  for (size_t i = 0; i < mu.size(); ++i) {
    if (mu[i].neg() || ctx.atom(mu[i].atom()).kind != AtomKind::TEq) continue;
    cc.assert_lit(mu[i]);
    pos.push_back(mu[i]);
    pos_sides.push_back(sides[i] == Side::B ? Side::B : Side::A);
  }
  if (!cc.equal(a, b)) return std::nullopt;
  Colorer col(ctx, cc, pos, pos_sides, shared);
  IPath p = col.build(a, b);
  // the first shared term seen from the A end
  for (TermId t : p.terms)
    if (col.common(t) && cc.equal(a, t) && cc.equal(t, b)) return t;
  return std::nullopt;
}

bool EufHook::check(bool, std::vector<Lit>& conflict) {
  if (cc_.check()) return true;
  conflict = cc_.conflict();
  return false;
}

void EufHook::implied(const std::function<bool(AtomId)>& open, std::vector<Implication>& out) {
  for (AtomId a : ie_atoms_) {
    if (!open(a)) continue;
    const AtomNode& n = ctx_.atom(a);
    if (cc_.equal(n.lhs, n.rhs)) out.push_back(Implication{Lit::make(a), cc_.explain(n.lhs, n.rhs)});
  }
}

}  // namespace smtitp
