#include "smtitp/utvpi.hpp"

#include <algorithm>
#include <numeric>

namespace smtitp {

int UtvpiEncoding::pos(TermId x) {
  auto it = idx_.find(x);
  if (it != idx_.end()) return 2 * it->second;
  int i = static_cast<int>(vars_.size());
  idx_[x] = i;
  vars_.push_back(x);
  g_.ensure_vertices(2 * i + 2);
  return 2 * i;
}

void UtvpiEncoding::add(Lit l, int tag) {
  auto leaves = ineq_leaves(ctx_, l);
  if (leaves.empty()) throw Error("not a UTVPI literal: " + ctx_.lit_str(l));
  for (auto& leaf : leaves) {
    auto c = unit_constraint(leaf);
    if (!c) throw Error("not a UTVPI constraint: " + ctx_.lit_str(l));
    Delta k = integer_ ? Delta(integer_bound(c->k)) : c->k;
    int x = pos(c->x);
    int xs = c->sx > 0 ? x : flip(x);
    if (c->sy == 0) {
      g_.add_edge(flip(xs), xs, k * 2, tag);
      continue;
    }
    int y = pos(c->y);
    int ys = c->sy > 0 ? y : flip(y);
    g_.add_edge(flip(ys), xs, k, tag);
    g_.add_edge(flip(xs), ys, k, tag);
  }
}

LinTerm UtvpiEncoding::upsilon(int v) const { return LinTerm::of(var_of(v), is_pos(v) ? 1 : -1); }

LinTerm UtvpiEncoding::summary_term(int u, int v, const Rational& w) const {
  LinTerm t = upsilon(v) - upsilon(u) + LinTerm::constant(w);
  if (t.mons.size() == 1 && abs(t.mons[0].second) == 2) t = t.scaled(Rational(1, 2));
  return t;
}

std::string UtvpiEncoding::vertex_name(int v) const {
  return ctx_.term_str(var_of(v)) + (is_pos(v) ? "+" : "-");
}

namespace {

std::optional<ZeroCycle> zero_cycle(const ConstraintGraph& g, const std::vector<std::pair<std::string, int>>& order,
                                    const std::vector<TermId>& vars) {
  auto ap = g.all_pairs();
  std::optional<ZeroCycle> best;
  for (auto& [name, i] : order) {
    int p = 2 * i, n = 2 * i + 1;
    if (!ap.reach[n][p] || !ap.reach[p][n]) continue;
    const Rational& up = ap.dist[n][p];
    const Rational& down = ap.dist[p][n];
    if (up + down != 0 || !is_integer(up)) continue;
    mpz_class num = up.get_num();
    if (mpz_odd_p(num.get_mpz_t()) == 0) continue;
    ZeroCycle w;
    w.var = vars[i];
    w.walk = ap.path(n, p, g);
    w.split = w.walk.size();
    auto back = ap.path(p, n, g);
    w.walk.insert(w.walk.end(), back.begin(), back.end());
    w.neg_to_pos = up;
    w.pos_to_neg = down;
    // shortest closed walk first, then name order
    if (!best || w.walk.size() < best->walk.size()) best = std::move(w);
  }
  return best;
}

std::vector<std::pair<std::string, int>> name_order(const UtvpiEncoding& enc) {
  std::vector<std::pair<std::string, int>> order;
  for (size_t i = 0; i < enc.num_vars(); ++i) {
    std::string nm = enc.vertex_name(static_cast<int>(2 * i));
    nm.pop_back();
    order.push_back({nm, static_cast<int>(i)});
  }
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<TermId> var_list(const UtvpiEncoding& enc) {
  std::vector<TermId> vars;
  for (size_t i = 0; i < enc.num_vars(); ++i) vars.push_back(enc.var_of(static_cast<int>(2 * i)));
  return vars;
}

}  // namespace

std::optional<ZeroCycle> find_zero_cycle(const UtvpiEncoding& enc) {
  return zero_cycle(enc.graph(), name_order(enc), var_list(enc));
}

// ---------------------------------------------------------------- solver

UtvpiSolver::UtvpiSolver(const Context& ctx, bool integer) : ctx_(ctx), integer_(integer), enc_(ctx, integer) {}

void UtvpiSolver::assert_lit(Lit l) {
  edge_marks_.push_back(enc_.graph().num_edges());
  int tag = static_cast<int>(lits_.size());
  lits_.push_back(l);
  enc_.add(l, tag);
}

bool UtvpiSolver::check(bool full) {
  std::vector<int> cycle;
  auto collect = [&](const std::vector<int>& edges) {
    conflict_.clear();
    for (int e : edges) {
      Lit l = lits_[enc_.graph().edge(e).tag];
      if (std::find(conflict_.begin(), conflict_.end(), l) == conflict_.end()) conflict_.push_back(l);
    }
  };
  if (enc_.graph().negative_cycle(cycle)) {
    collect(cycle);
    conflict_z_ = false;
    return false;
  }
  if (!integer_ || !full) return true;
  auto w = find_zero_cycle(enc_);
  if (!w) return true;
  collect(w->walk);
  conflict_z_ = true;
  return false;
}

void UtvpiSolver::backtrack(size_t keep) {
  if (keep >= lits_.size()) return;
  enc_.truncate(edge_marks_[keep]);
  edge_marks_.resize(keep);
  lits_.resize(keep);
}

std::map<TermId, Rational> UtvpiSolver::model() {
  const ConstraintGraph& g = enc_.graph();
  std::map<TermId, Rational> out;
  if (!integer_) {
    auto d = g.potentials();
    std::vector<std::pair<TermId, Delta>> vals;
    for (size_t i = 0; i < enc_.num_vars(); ++i)
      vals.push_back({enc_.var_of(static_cast<int>(2 * i)), (-d[2 * i] + d[2 * i + 1]) * Rational(1, 2)});
    std::vector<std::pair<Delta, Delta>> need;
    for (size_t i = 0; i < g.num_edges(); ++i) {
      const GraphEdge& e = g.edge(i);
      need.push_back({Delta(0), -d[e.v] + d[e.u] + e.w});
    }
    return concretize(vals, need);
  }
  // integers: fix variables one at a time inside their tightened range
  ConstraintGraph work = g;
  auto order = name_order(enc_);
  auto vars = var_list(enc_);
  for (auto& [name, i] : order) {
    int p = 2 * i, n = 2 * i + 1;
    auto ap = work.all_pairs();
    std::vector<Rational> cands;
    if (ap.reach[n][p]) {
      Rational lo = ceil_q(-ap.dist[n][p] / 2);
      for (int k = 0; k < 8; ++k) cands.push_back(lo + k);
    } else if (ap.reach[p][n]) {
      Rational hi = floor_q(ap.dist[p][n] / 2);
      for (int k = 0; k < 8; ++k) cands.push_back(hi - k);
    } else {
      cands.push_back(0);
    }
    bool placed = false;
    for (auto& v : cands) {
      ConstraintGraph trial = work;
      trial.add_edge(n, p, Delta(-2 * v), -1);
      trial.add_edge(p, n, Delta(2 * v), -1);
      std::vector<int> cyc;
      if (trial.negative_cycle(cyc) || zero_cycle(trial, order, vars)) continue;
      work = trial;
      out[vars[i]] = v;
      placed = true;
      break;
    }
    if (!placed) throw Error("integer model construction failed");
  }
  return out;
}

// ---------------------------------------------------------------- interpolation

namespace {

struct Walk {
  ConstraintGraph g;
  std::vector<int> edges;
  std::vector<bool> in_a;  // per position
};

Formula runs_formula(Context& ctx, const UtvpiEncoding& enc, const Walk& w, const std::vector<size_t>& cuts) {
  bool all_a = true, all_b = true;
  for (bool a : w.in_a) (a ? all_b : all_a) = false;
  if (all_a) return f_false();
  if (all_b) return f_true();
  std::vector<Formula> conj;
  for (auto& run : maximal_runs(w.g, w.edges, [&](int pos) { return w.in_a[pos]; }, cuts)) {
    LinTerm t = enc.summary_term(run.from, run.to, run.w.r);
    conj.push_back(run.w.e < 0 ? f_lt(ctx, t) : f_leq(ctx, t));
  }
  return f_and(conj);
}

Walk copy_walk(const UtvpiEncoding& enc, const std::vector<int>& edges, size_t from, size_t to,
               const std::vector<Side>& sides) {
  Walk w;
  w.g.ensure_vertices(enc.graph().num_vertices());
  for (size_t i = from; i < to; ++i) {
    const GraphEdge& e = enc.graph().edge(edges[i]);
    w.edges.push_back(w.g.add_edge(e.u, e.v, e.w, e.tag));
    w.in_a.push_back(sides[e.tag] != Side::B);
  }
  return w;
}

bool occurs_in(const Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides, TermId x, Side s) {
  for (size_t i = 0; i < eta.size(); ++i) {
    if (sides[i] != s) continue;
    for (auto& leaf : ineq_leaves(ctx, eta[i]))
      if (leaf.t.coeff(x) != 0) return true;
  }
  return false;
}

bool pure_a(const UtvpiEncoding& enc, const ZeroCycle& w, size_t from, size_t to, const std::vector<Side>& sides) {
  for (size_t i = from; i < to; ++i)
    if (sides[enc.graph().edge(w.walk[i]).tag] == Side::B) return false;
  return true;
}

}  // namespace

int utvpi_classify(const Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides,
                   const UtvpiEncoding& enc, const ZeroCycle& w) {
  if (pure_a(enc, w, 0, w.split, sides) || pure_a(enc, w, w.split, w.walk.size(), sides)) return 3;
  bool in_a = occurs_in(ctx, eta, sides, w.var, Side::A);
  bool in_b = occurs_in(ctx, eta, sides, w.var, Side::B);
  if (!in_a) return 1;
  if (in_b) return 2;
  return 4;
}

Formula utvpi_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides, bool integer,
                          UtvpiItpInfo* info) {
  UtvpiEncoding enc(ctx, integer);
  for (size_t i = 0; i < eta.size(); ++i) enc.add(eta[i], static_cast<int>(i));
  std::vector<int> cycle;
  if (enc.graph().negative_cycle(cycle)) {
    if (info) info->ucase = 0;
    Walk w = copy_walk(enc, cycle, 0, cycle.size(), sides);
    return runs_formula(ctx, enc, w, {});
  }
  if (!integer) throw Error("UTVPI interpolation: literal set is consistent");
  auto z = find_zero_cycle(enc);
  if (!z) throw Error("UTVPI interpolation: literal set is consistent over the integers");
  int c = utvpi_classify(ctx, eta, sides, enc, *z);
  if (info) {
    info->ucase = c;
    info->var = z->var;
    info->var_name = ctx.term_str(z->var);
  }
  size_t m = z->walk.size();
  int xp = enc.pos(z->var), xn = UtvpiEncoding::flip(xp);
  if (c == 1 || c == 2) {
    Walk w = copy_walk(enc, z->walk, 0, m, sides);
    return runs_formula(ctx, enc, w, {0, z->split});
  }
  // tighten one odd path into a single A edge and summarize the rest
  bool first = c == 4 || pure_a(enc, *z, 0, z->split, sides);
  size_t keep_from = first ? z->split : 0, keep_to = first ? m : z->split;
  Rational odd = first ? z->neg_to_pos : z->pos_to_neg;
  Walk w;
  w.g.ensure_vertices(enc.graph().num_vertices());
  Delta tight(odd - 1);
  w.edges.push_back(first ? w.g.add_edge(xn, xp, tight, -1) : w.g.add_edge(xp, xn, tight, -1));
  w.in_a.push_back(true);
  for (size_t i = keep_from; i < keep_to; ++i) {
    const GraphEdge& e = enc.graph().edge(z->walk[i]);
    w.edges.push_back(w.g.add_edge(e.u, e.v, e.w, e.tag));
    w.in_a.push_back(sides[e.tag] != Side::B);
  }
  Delta total;
  for (int e : w.edges) total += w.g.edge(e).w;
  if (!(total <= Delta(-1))) throw Error("tightened cycle is not negative");
  Formula itp = runs_formula(ctx, enc, w, {});
  if (c == 3) return itp;
  // conditional: condition on the B summaries inside the tightened path
  std::vector<Formula> cond;
  size_t i = 0;
  while (i < z->split) {
    const GraphEdge& e0 = enc.graph().edge(z->walk[i]);
    if (sides[e0.tag] != Side::B) {
      ++i;
      continue;
    }
    int from = e0.u, to = e0.v;
    Rational wsum = 0;
    while (i < z->split && sides[enc.graph().edge(z->walk[i]).tag] == Side::B) {
      wsum += enc.graph().edge(z->walk[i]).w.r;
      to = enc.graph().edge(z->walk[i]).v;
      ++i;
    }
    cond.push_back(f_leq(ctx, enc.summary_term(from, to, wsum)));
  }
  return f_implies(f_and(cond), itp);
}

bool utvpi_unsat(const Context& ctx, const std::vector<Lit>& lits, bool integer) {
  UtvpiSolver s(ctx, integer);
  for (Lit l : lits) s.assert_lit(l);
  return !s.check(true);
}

bool UtvpiHook::check(bool final_check, std::vector<Lit>& conflict) {
  if (solver_.check(final_check)) return true;
  conflict = solver_.conflict();
  return false;
}

}  // namespace smtitp
