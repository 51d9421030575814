#include "smtitp/dtc.hpp"

#include <algorithm>
#include <functional>

#include "smtitp/cnf.hpp"
#include "smtitp/euf.hpp"
#include "smtitp/la.hpp"
#include "smtitp/purify.hpp"
#include "smtitp/theories.hpp"

namespace smtitp {

std::map<AtomId, Side> InterfaceCatalog::classify(const Context& ctx, const Partition& part, int k) const {
  std::map<AtomId, Side> out;
  for (AtomId a : ie) out[a] = part.atom_side(ctx, a, k);
  return out;
}

namespace {

bool arith_var(const Context& ctx, TermId t) {
  return ctx.term(t).kind == TermKind::Var && ctx.is_arith_sort(ctx.sort_of(t));
}

void collect_vars(const Context& ctx, TermId t, std::set<TermId>& out) {
  const TermNode& n = ctx.term(t);
  if (n.kind == TermKind::Var) {
    if (ctx.is_arith_sort(n.sort)) out.insert(t);
  } else if (n.kind == TermKind::App) {
    for (TermId a : n.args) collect_vars(ctx, a, out);
  } else if (n.kind == TermKind::Lin) {
    for (auto& [m, q] : n.lin.mons) collect_vars(ctx, m, out);
  }
}

void collect_lin_vars(const Context& ctx, const LinTerm& t, std::set<TermId>& out) {
  for (auto& [m, q] : t.mons) collect_vars(ctx, m, out);
}

}  // namespace

DtcRun run_dtc(Context& ctx, const std::vector<Formula>& parts, SatConfig cfg) {
  if (parts.empty()) throw Error("no assertions");
  DtcRun run;
  run.partition = Partition(static_cast<int>(parts.size()));
  cfg.dtc = true;

  Purifier pur(ctx);
  CnfConverter cnf(ctx);
  std::vector<std::pair<Clause, int>> clauses;
  for (size_t i = 0; i < parts.size(); ++i) {
    int label = static_cast<int>(i) + 1;
    std::vector<Clause> cs;
    cnf.add(pur.purify(parts[i], label), label, cs);
    for (auto& c : cs) {
      run.partition.note_clause(ctx, c, label);
      clauses.emplace_back(std::move(c), label);
    }
  }

  LaHook la(ctx);
  EufHook euf(ctx);
  std::set<AtomId> input_atoms;
  std::set<TermId> euf_vars, la_vars;
  for (auto& [c, label] : clauses) {
    for (Lit l : c) {
      AtomId a = l.atom();
      if (!input_atoms.insert(a).second) continue;
      const AtomNode& n = ctx.atom(a);
      if (n.kind == AtomKind::Bool) continue;
      if (n.kind == AtomKind::TEq) {
        euf.own(a);
        collect_vars(ctx, n.lhs, euf_vars);
        collect_vars(ctx, n.rhs, euf_vars);
        if (arith_var(ctx, n.lhs) && arith_var(ctx, n.rhs)) {
          la.own(a);
          la_vars.insert(n.lhs);
          la_vars.insert(n.rhs);
        }
        continue;
      }
      la.own(a);
      collect_lin_vars(ctx, n.lin, la_vars);
    }
  }
  for (TermId v : la_vars)
    if (ctx.sort_of(v) == kIntSort)
      throw Error("integer arithmetic is not convex; combination needs rational variables (" + ctx.term_str(v) + ")");

  for (TermId v : euf_vars)
    if (la_vars.count(v)) run.catalog.vars.push_back(v);

  Cdcl sat(ctx, run.raw, cfg);
  sat.add_hook(&la);
  sat.add_hook(&euf);
  for (auto& [c, label] : clauses) sat.add_input(c, label);
  const auto& iv = run.catalog.vars;
  for (size_t i = 0; i < iv.size(); ++i) {
    for (size_t j = i + 1; j < iv.size(); ++j) {
      AtomId a = ctx.mk_teq(iv[i], iv[j]);
      if (input_atoms.count(a)) continue;
      sat.mark_interface(a);
      la.own(a);
      euf.own(a);
      la.add_interface(a);
      euf.add_interface(a);
      run.catalog.eqs.push_back(a);
      run.catalog.ie.insert(a);
    }
  }

  run.status = sat.solve();
  run.conflicts = sat.num_conflicts();
  run.decisions = sat.num_decisions();
  if (cfg.record_trail) {
    run.trail = sat.trail_log();
    run.trail_text = sat.trail_dump(ctx);
  }
  if (run.status == SatStatus::Sat) run.model = la.solver().model();
  if (run.status == SatStatus::Unsat) run.proof = linearize_ie_subproofs(run.raw, run.catalog.ie, &run.regions_rebuilt);
  return run;
}

bool dtc_unsat(Context& ctx, const Formula& f, uint64_t budget) {
  SatConfig cfg;
  cfg.budget = budget;
  DtcRun run = run_dtc(ctx, {f}, cfg);
  if (run.status == SatStatus::Budget) throw Error("budget exhausted");
  return run.status == SatStatus::Unsat;
}

namespace {

bool has_ie(const Clause& c, const std::set<AtomId>& ie) {
  for (Lit l : c)
    if (ie.count(l.atom())) return true;
  return false;
}

int positive_ie(const Clause& c, const std::set<AtomId>& ie) {
  int n = 0;
  for (Lit l : c)
    if (!l.neg() && ie.count(l.atom())) ++n;
  return n;
}

bool ie_res(const Proof& p, int n, const std::set<AtomId>& ie) {
  const ProofNode& x = p.node(n);
  return x.kind == NodeKind::Res && ie.count(x.pivot);
}

std::vector<IeRegion> find_regions(const Proof& p, const std::set<AtomId>& ie, std::vector<int>& reach) {
  std::vector<IeRegion> out;
  if (p.root() < 0) return out;
  reach = p.reachable(p.root());
  for (int n : reach) {
    if (!ie_res(p, n, ie) || has_ie(p.node(n).clause, ie)) continue;
    IeRegion r;
    r.root = n;
    std::set<int> seen;
    std::vector<int> stack{n};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (!seen.insert(x).second) continue;
      if (ie_res(p, x, ie)) {
        r.inner.push_back(x);
        stack.push_back(p.node(x).left);
        stack.push_back(p.node(x).right);
      } else {
        r.leaves.push_back(x);
      }
    }
    std::sort(r.inner.begin(), r.inner.end());
    std::sort(r.leaves.begin(), r.leaves.end());
    out.push_back(std::move(r));
  }
  return out;
}

// left spine of a linear region: the start leaf and (pivot, leaf) steps from the bottom up
struct Chain {
  int start = -1;
  std::vector<std::pair<AtomId, int>> steps;
};

Chain spine(const Proof& p, int root, const std::set<AtomId>& ie) {
  Chain c;
  int n = root;
  while (ie_res(p, n, ie)) {
    c.steps.emplace_back(p.node(n).pivot, p.node(n).right);
    n = p.node(n).left;
  }
  c.start = n;
  std::reverse(c.steps.begin(), c.steps.end());
  return c;
}

bool subsumes(const Clause& c, const Clause& d) {
  for (Lit l : c)
    if (!clause_has(d, l)) return false;
  return true;
}

}  // namespace

IeAudit audit_ie_local(const Proof& p, const std::set<AtomId>& ie, bool require_linear) {
  IeAudit au;
  std::vector<int> reach;
  au.regions = find_regions(p, ie, reach);
  auto fail = [&](int n, const std::string& why) {
    if (au.ok) au.message = "node " + std::to_string(n) + ": " + why;
    au.ok = false;
  };
  std::set<int> inner, leaves;
  for (auto& r : au.regions) {
    inner.insert(r.inner.begin(), r.inner.end());
    leaves.insert(r.leaves.begin(), r.leaves.end());
  }
  for (int n : reach) {
    const ProofNode& x = p.node(n);
    if (x.kind == NodeKind::Lemma && positive_ie(x.clause, ie) > 1)
      fail(n, "lemma with more than one positive interface equality");
    if (inner.count(n)) continue;
    if (ie_res(p, n, ie)) fail(n, "resolution on an interface equality outside a region");
    if (leaves.count(n)) {
      if (x.kind != NodeKind::Lemma) fail(n, "region leaf is not a theory lemma");
    } else if (has_ie(x.clause, ie)) {
      fail(n, "interface equality outside a region");
    }
  }
  if (!require_linear) return au;
  for (auto& r : au.regions) {
    for (int n : r.inner) {
      int rp = p.node(n).right;
      if (ie_res(p, rp, ie)) fail(n, "right premise is not a leaf");
      else if (positive_ie(p.node(rp).clause, ie) != 1) fail(rp, "right leaf lacks its positive interface equality");
    }
    Chain c = spine(p, r.root, ie);
    if (positive_ie(p.node(c.start).clause, ie) != 0) fail(c.start, "start leaf has a positive interface equality");
  }
  return au;
}

namespace {

// a region leaf: an existing node, or a new lemma when old < 0
struct Leaf {
  AtomId pivot = 0;
  int old = -1;
  Clause clause;
  std::string theory;
};

struct Plan {
  Leaf start;
  std::vector<Leaf> steps;
};

// Copies the part of p reachable from its root, building each planned region root as a chain.
Proof rebuild(const Proof& p, const std::map<int, Plan>& plans) {
  std::set<int> needed;
  std::vector<int> stack{p.root()};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (!needed.insert(n).second) continue;
    auto it = plans.find(n);
    if (it != plans.end()) {
      if (it->second.start.old >= 0) stack.push_back(it->second.start.old);
      for (auto& s : it->second.steps)
        if (s.old >= 0) stack.push_back(s.old);
    } else if (p.node(n).kind == NodeKind::Res) {
      stack.push_back(p.node(n).left);
      stack.push_back(p.node(n).right);
    }
  }
  Proof q;
  std::map<int, int> m;
  auto leaf = [&](const Leaf& l) { return l.old >= 0 ? m.at(l.old) : q.add_lemma(l.clause, l.theory); };
  for (int n : needed) {
    const ProofNode& x = p.node(n);
    auto it = plans.find(n);
    if (it != plans.end()) {
      int cur = leaf(it->second.start);
      for (auto& s : it->second.steps) {
        // a split equality can coincide with a later pivot that is then already resolved away
        if (!clause_has(q.node(cur).clause, Lit::make(s.pivot, true))) continue;
        int l = leaf(s);
        if (!clause_has(q.node(l).clause, Lit::make(s.pivot)))
          throw Error("interface region at node " + std::to_string(n) + " does not chain");
        cur = q.add_res(cur, l, s.pivot);
      }
      if (!subsumes(q.node(cur).clause, x.clause))
        throw Error("rewriting changed the clause of region root " + std::to_string(n));
      m[n] = cur;
      continue;
    }
    switch (x.kind) {
      case NodeKind::Input: m[n] = q.add_input(x.clause, x.part); break;
      case NodeKind::Lemma: m[n] = q.add_lemma(x.clause, x.theory); break;
      case NodeKind::Res: {
        int l = m.at(x.left), r = m.at(x.right);
        if (!clause_has(q.node(l).clause, Lit::make(x.pivot, true))) m[n] = l;
        else if (!clause_has(q.node(r).clause, Lit::make(x.pivot))) m[n] = r;
        else m[n] = q.add_res(l, r, x.pivot);
        break;
      }
    }
  }
  q.set_root(m.at(p.root()));
  return q;
}

}  // namespace

Proof linearize_ie_subproofs(const Proof& p, const std::set<AtomId>& ie, size_t* rebuilt) {
  std::vector<int> reach;
  auto regions = find_regions(p, ie, reach);
  std::map<int, Chain> memo;
  std::function<const Chain&(int)> flat = [&](int n) -> const Chain& {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Chain c;
    if (!ie_res(p, n, ie)) {
      c.start = n;
    } else {
      Chain y = flat(p.node(n).left);
      const Chain& x = flat(p.node(n).right);
      c.start = y.start;
      c.steps = std::move(y.steps);
      c.steps.emplace_back(p.node(n).pivot, x.start);
      c.steps.insert(c.steps.end(), x.steps.begin(), x.steps.end());
    }
    return memo.emplace(n, std::move(c)).first->second;
  };
  std::map<int, Plan> plans;
  for (auto& r : regions) {
    bool linear = true;
    for (int n : r.inner)
      if (ie_res(p, p.node(n).right, ie)) linear = false;
    if (linear) continue;
    const Chain& c = flat(r.root);
    Plan pl;
    pl.start.old = c.start;
    for (auto [piv, l] : c.steps) pl.steps.push_back(Leaf{piv, l, {}, {}});
    plans.emplace(r.root, std::move(pl));
  }
  if (rebuilt) *rebuilt = plans.size();
  if (plans.empty()) return p;
  try {
    return rebuild(p, plans);
  } catch (const Error& e) {
    throw Error(std::string("interface region cannot be linearized: ") + e.what());
  }
}

namespace {

Clause substitute(const Clause& c, const std::map<AtomId, std::pair<AtomId, AtomId>>& sigma) {
  Clause out;
  for (Lit l : c) {
    auto it = l.neg() ? sigma.find(l.atom()) : sigma.end();
    if (it == sigma.end()) {
      out.push_back(l);
    } else {
      out.push_back(Lit::make(it->second.first, true));
      out.push_back(Lit::make(it->second.second, true));
    }
  }
  normalize_clause(out);
  return out;
}

}  // namespace

Proof split_ab_mixed(Context& ctx, const Proof& p, const Partition& part, int k, std::set<AtomId>& ie,
                     SplitStats* stats) {
  std::vector<int> reach;
  auto regions = find_regions(p, ie, reach);
  SplitStats local;
  SplitStats& st = stats ? *stats : local;
  st.nodes_before = p.reachable_size();
  auto shared = [&](SymId s) { return part.sym_in_A(s, k) && part.sym_in_B(s, k); };
  auto rewritten = [&](int old, const Clause& c, AtomId pivot) {
    const ProofNode& n = p.node(old);
    if (c == n.clause) return Leaf{pivot, old, {}, {}};
    if (!lemma_valid(ctx, n.theory, c)) throw Error("rewritten " + n.theory + " lemma is not valid");
    return Leaf{pivot, -1, c, n.theory};
  };

  std::map<int, Plan> plans;
  for (auto& r : regions) {
    Chain ch = spine(p, r.root, ie);
    bool any = false;
    for (auto& s : ch.steps)
      if (part.atom_side(ctx, s.first, k) == Side::Mixed) any = true;
    if (!any) continue;

    std::map<AtomId, std::pair<AtomId, AtomId>> sigma;
    std::vector<std::vector<Leaf>> repl(ch.steps.size());
    for (size_t i = ch.steps.size(); i-- > 0;) {
      auto [piv, old] = ch.steps[i];
      const ProofNode& L = p.node(old);
      Clause cs = substitute(L.clause, sigma);
      if (part.atom_side(ctx, piv, k) != Side::Mixed) {
        repl[i].push_back(rewritten(old, cs, piv));
        continue;
      }
      const AtomNode& eq = ctx.atom(piv);
      TermId a = eq.lhs, b = eq.rhs;
      if (!part.syms_preceq_A(ctx.term_symbols(a), k)) std::swap(a, b);
      Clause rest;
      std::vector<Lit> mu;
      std::vector<Side> sides;
      for (Lit l : cs) {
        if (l == Lit::make(piv)) continue;
        rest.push_back(l);
        mu.push_back(~l);
        sides.push_back(part.atom_side(ctx, l.atom(), k));
      }
      std::optional<TermId> t;
      if (L.theory == "LA") {
        auto lt = la_interpolating_term(ctx, ctx.lin_of(a), ctx.lin_of(b), mu, sides);
        if (lt) t = ctx.mk_lin(*lt);
      } else if (L.theory == "EUF") {
        t = euf_interpolating_term(ctx, a, b, mu, sides, shared);
      } else {
        throw Error("theory " + L.theory + " supplies no equality-interpolating terms");
      }
      if (!t) throw Error("no interpolating term for " + ctx.atom_str(piv));
      if (*t == a || *t == b) throw Error("interpolating term for " + ctx.atom_str(piv) + " is an endpoint");
      SplitRecord rec;
      rec.eq = piv;
      rec.a = a;
      rec.b = b;
      rec.t = *t;
      rec.left = ctx.mk_teq(a, *t);
      rec.right = ctx.mk_teq(*t, b);
      rec.theory = L.theory;
      rec.c1 = rest;
      rec.c1.push_back(Lit::make(rec.left));
      normalize_clause(rec.c1);
      rec.c2 = rest;
      rec.c2.push_back(Lit::make(rec.right));
      normalize_clause(rec.c2);
      for (auto* c : {&rec.c1, &rec.c2})
        if (!lemma_valid(ctx, L.theory, *c)) throw Error("split " + L.theory + " lemma is not valid");
      repl[i].push_back(Leaf{rec.left, -1, rec.c1, L.theory});
      repl[i].push_back(Leaf{rec.right, -1, rec.c2, L.theory});
      sigma[piv] = {rec.left, rec.right};
      ie.insert(rec.left);
      ie.insert(rec.right);
      st.splits.push_back(std::move(rec));
    }

    Plan pl;
    pl.start = rewritten(ch.start, substitute(p.node(ch.start).clause, sigma), 0);
    for (auto& v : repl) pl.steps.insert(pl.steps.end(), v.begin(), v.end());
    plans.emplace(r.root, std::move(pl));
  }
  Proof q = plans.empty() ? p : rebuild(p, plans);
  st.nodes_after = q.reachable_size();
  return q;
}

std::vector<Formula> interpolate_combined(Context& ctx, const DtcRun& run, const LemmaItp& itp,
                                          std::vector<SplitStats>* stats) {
  if (run.status != SatStatus::Unsat) throw Error("interpolation needs an unsatisfiable run");
  std::vector<Formula> out;
  for (int k = 1; k < run.partition.num_parts(); ++k) {
    std::set<AtomId> ie = run.catalog.ie;
    SplitStats st;
    Proof pk = split_ab_mixed(ctx, run.proof, run.partition, k, ie, &st);
    out.push_back(interpolate(ctx, pk, run.partition, itp, k));
    if (stats) stats->push_back(std::move(st));
  }
  return out;
}

}  // namespace smtitp
