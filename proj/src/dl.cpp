#include "smtitp/dl.hpp"

#include <algorithm>

namespace smtitp {

std::vector<LaLeaf> ineq_leaves(const Context& ctx, Lit l) {
  std::vector<LaLeaf> out;
  auto leaf = la_leaf(ctx, l, 1);
  if (!leaf) return out;
  out.push_back(*leaf);
  if (leaf->from_eq) out.push_back(*la_leaf(ctx, l, -1));
  return out;
}

std::optional<UnitConstraint> unit_constraint(const LaLeaf& leaf) {
  const auto& m = leaf.t.mons;
  if (m.empty() || m.size() > 2) return std::nullopt;
  Rational a = abs(m[0].second);
  if (m.size() == 2 && abs(m[1].second) != a) return std::nullopt;
  UnitConstraint c;
  c.scale = a;
  c.x = m[0].first;
  c.sx = sgn(m[0].second);
  if (m.size() == 2) {
    c.y = m[1].first;
    c.sy = sgn(m[1].second);
  }
  c.k = Delta(leaf.t.c / a, leaf.e / a);
  c.leaf = leaf;
  return c;
}

bool is_dl_shape(const UnitConstraint& c) { return c.sy != 0 && c.sx == -c.sy; }

Rational integer_bound(const Delta& k) {
  if (k.e < 0) return ceil_q(k.r) - 1;
  return floor_q(k.r);
}

namespace {

// edge u -> v with 0 <= v - u + w
struct DlEdge {
  TermId from, to;
  Delta w;
};

DlEdge dl_edge(const Context& ctx, const LaLeaf& leaf, bool integer) {
  auto c = unit_constraint(leaf);
  if (!c || !is_dl_shape(*c)) throw Error("not a difference constraint: " + ctx.lit_str(leaf.lit));
  TermId pos = c->sx > 0 ? c->x : c->y;
  TermId neg = c->sx > 0 ? c->y : c->x;
  Delta w = integer ? Delta(integer_bound(c->k)) : c->k;
  return {neg, pos, w};
}

}  // namespace

DlSolver::DlSolver(const Context& ctx, bool integer) : ctx_(ctx), integer_(integer) {}

int DlSolver::vertex(TermId t) {
  auto it = vid_.find(t);
  if (it != vid_.end()) return it->second;
  int v = g_.add_vertex();
  vid_[t] = v;
  vterm_.push_back(t);
  return v;
}

void DlSolver::assert_lit(Lit l) {
  auto leaves = ineq_leaves(ctx_, l);
  if (leaves.empty()) throw Error("not a difference literal: " + ctx_.lit_str(l));
  edge_marks_.push_back(g_.num_edges());
  int tag = static_cast<int>(lits_.size());
  lits_.push_back(l);
  for (auto& leaf : leaves) {
    DlEdge e = dl_edge(ctx_, leaf, integer_);
    int u = vertex(e.from), v = vertex(e.to);
    g_.add_edge(u, v, e.w, tag);
  }
}

bool DlSolver::check() {
  std::vector<int> cycle;
  if (!g_.negative_cycle(cycle)) return true;
  conflict_.clear();
  for (int e : cycle) {
    Lit l = lits_[g_.edge(e).tag];
    if (std::find(conflict_.begin(), conflict_.end(), l) == conflict_.end()) conflict_.push_back(l);
  }
  return false;
}

void DlSolver::backtrack(size_t keep) {
  if (keep >= lits_.size()) return;
  g_.truncate(edge_marks_[keep]);
  edge_marks_.resize(keep);
  lits_.resize(keep);
}

std::map<TermId, Rational> DlSolver::model() const {
  auto d = g_.potentials();
  std::vector<std::pair<TermId, Delta>> vals;
  for (size_t v = 0; v < vterm_.size(); ++v) vals.push_back({vterm_[v], -d[v]});
  std::vector<std::pair<Delta, Delta>> need;
  for (size_t i = 0; i < g_.num_edges(); ++i) {
    const GraphEdge& e = g_.edge(i);
    // 0 <= val(v) - val(u) + w
    need.push_back({Delta(0), -d[e.v] + d[e.u] + e.w});
  }
  return concretize(vals, need);
}

std::string DlSolver::dot(const std::function<Side(Lit)>& side) const {
  return g_.dot([&](int v) { return ctx_.term_str(vterm_[v]); },
                [&](const GraphEdge& e) {
                  Side s = side ? side(lits_[e.tag]) : Side::Mixed;
                  return std::string(s == Side::A ? "red" : s == Side::B ? "blue" : "black");
                });
}

void dl_build(const Context& ctx, const std::vector<Lit>& eta, bool integer, ConstraintGraph& g,
              std::vector<TermId>& vterm) {
  std::map<TermId, int> vid;
  auto vertex = [&](TermId t) {
    auto it = vid.find(t);
    if (it != vid.end()) return it->second;
    int v = g.add_vertex();
    vid[t] = v;
    vterm.push_back(t);
    return v;
  };
  for (size_t i = 0; i < eta.size(); ++i)
    for (auto& leaf : ineq_leaves(ctx, eta[i])) {
      DlEdge e = dl_edge(ctx, leaf, integer);
      int u = vertex(e.from), v = vertex(e.to);
      g.add_edge(u, v, e.w, static_cast<int>(i));
    }
}

Formula dl_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides, bool integer) {
  ConstraintGraph g;
  std::vector<TermId> vterm;
  dl_build(ctx, eta, integer, g, vterm);
  std::vector<int> cycle;
  if (!g.negative_cycle(cycle)) throw Error("DL interpolation: literal set is consistent");
  auto in_a = [&](int pos) { return sides[g.edge(cycle[pos]).tag] != Side::B; };
  bool all_a = true, all_b = true;
  for (size_t i = 0; i < cycle.size(); ++i) {
    if (in_a(static_cast<int>(i)))
      all_b = false;
    else
      all_a = false;
  }
  if (all_a) return f_false();
  if (all_b) return f_true();
  std::vector<Formula> conj;
  for (auto& run : maximal_runs(g, cycle, in_a)) {
    LinTerm t = LinTerm::of(vterm[run.to]) - LinTerm::of(vterm[run.from]) + LinTerm::constant(run.w.r);
    conj.push_back(run.w.e < 0 ? f_lt(ctx, t) : f_leq(ctx, t));
  }
  return f_and(conj);
}

std::optional<LaProof> dl_cycle_proof(const Context& ctx, const std::vector<Lit>& eta) {
  ConstraintGraph g;
  std::vector<TermId> vterm;
  dl_build(ctx, eta, false, g, vterm);
  std::vector<int> cycle;
  if (!g.negative_cycle(cycle)) return std::nullopt;
  // leaves in the order the edges were built, to recover the originating leaf
  std::vector<LaLeaf> leaves;
  for (size_t i = 0; i < eta.size(); ++i)
    for (auto& leaf : ineq_leaves(ctx, eta[i])) leaves.push_back(leaf);
  LaProof p;
  int acc = -1;
  for (int e : cycle) {
    auto c = unit_constraint(leaves[e]);
    int leaf = p.add_leaf(leaves[e]);
    Rational w = 1 / c->scale;
    acc = acc < 0 ? p.add_comb(leaf, -1, w, 0) : p.add_comb(acc, leaf, 1, w);
  }
  p.set_root(acc);
  return p;
}

std::map<TermId, Rational> concretize(const std::vector<std::pair<TermId, Delta>>& values,
                                      const std::vector<std::pair<Delta, Delta>>& must_leq) {
  // pick eps so that every lo <= hi stays true once eps is a number
  Rational eps = 1;
  for (auto& [lo, hi] : must_leq) {
    Delta gap = hi - lo;
    if (gap.r > 0 && gap.e < 0) {
      Rational lim = gap.r / (-gap.e) / 2;
      if (lim < eps) eps = lim;
    }
  }
  std::map<TermId, Rational> out;
  for (auto& [t, v] : values) out[t] = v.r + v.e * eps;
  return out;
}

bool DlHook::check(bool, std::vector<Lit>& conflict) {
  if (solver_.check()) return true;
  conflict = solver_.conflict();
  return false;
}

}  // namespace smtitp
