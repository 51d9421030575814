#include "smtitp/sat.hpp"

#include <algorithm>
#include <sstream>

namespace smtitp {

Cdcl::Cdcl(const Context& ctx, Proof& proof, SatConfig cfg)
    : ctx_(ctx), proof_(proof), cfg_(cfg), rng_(cfg.seed) {}

void Cdcl::add_hook(TheoryHook* h) { hooks_.push_back(HookState{h, {}}); }

void Cdcl::ensure(AtomId a) {
  if (a < val_.size()) return;
  size_t n = a + 1;
  val_.resize(n, 0);
  level_.resize(n, 0);
  reason_.resize(n, -1);
  relevant_.resize(n, 0);
  ie_.resize(n, 0);
  phase_.resize(n, 0);
  seen_.resize(n, 0);
  std::uniform_real_distribution<double> jitter(0.0, 1e-3);
  while (activity_.size() < n) activity_.push_back(cfg_.seed ? jitter(rng_) : 0.0);
  watches_.resize(2 * n);
}

void Cdcl::mark_interface(AtomId a) {
  ensure(a);
  if (relevant_[a] && !ie_[a]) throw Error("interface equality already occurs in the input");
  if (!ie_[a]) {
    ie_[a] = 1;
    relevant_[a] = 1;
    has_ie_ = true;
  }
}

int8_t Cdcl::lit_value(Lit l) const {
  int8_t v = val_[l.atom()];
  return l.neg() ? -v : v;
}

bool Cdcl::clause_has_ie(const std::vector<Lit>& lits) const {
  for (Lit l : lits)
    if (ie_[l.atom()]) return true;
  return false;
}

void Cdcl::add_input(Clause c, int part) {
  bool taut = !normalize_clause(c);
  for (Lit l : c) {
    ensure(l.atom());
    if (ie_[l.atom()]) throw Error("input clause mentions an interface equality");
    if (!relevant_[l.atom()]) {
      relevant_[l.atom()] = 1;
      ++originals_;
    }
  }
  if (taut) return;
  int node = proof_.add_input(c, part);
  if (c.empty()) {
    if (empty_input_ < 0) empty_input_ = node;
    return;
  }
  int ci = add_clause(c, node, c.size() > 1);
  if (c.size() == 1) units_.push_back(ci);
}

void Cdcl::assign(Lit l, int reason) {
  AtomId a = l.atom();
  val_[a] = l.neg() ? -1 : 1;
  level_[a] = decision_level();
  reason_[a] = reason;
  trail_.push_back(l);
  if (relevant_[a] && !ie_[a]) ++originals_assigned_;
}

void Cdcl::attach(int ci) {
  auto& lits = clauses_[ci].lits;
  auto key = [&](Lit l) {
    int8_t v = lit_value(l);
    if (v > 0) return 0;
    if (v == 0) return 1;
    return 2;
  };
  std::stable_sort(lits.begin(), lits.end(), [&](Lit a, Lit b) {
    int ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    if (ka == 2) return level(a) > level(b);
    return false;
  });
  if (lits.size() >= 2) {
    watches_[lits[0].x].push_back(ci);
    watches_[lits[1].x].push_back(ci);
  }
}

int Cdcl::add_clause(std::vector<Lit> lits, int proof, bool watch) {
  for (Lit l : lits) ensure(l.atom());
  bool ie = clause_has_ie(lits);
  clauses_.push_back(ClauseRec{std::move(lits), proof, ie});
  int ci = static_cast<int>(clauses_.size() - 1);
  if (watch) attach(ci);
  return ci;
}

int Cdcl::propagate() {
  while (qhead_ < trail_.size()) {
    Lit falsel = ~trail_[qhead_++];
    auto& ws = watches_[falsel.x];
    size_t i = 0, j = 0;
    int conflict = -1;
    while (i < ws.size()) {
      int ci = ws[i++];
      ClauseRec& c = clauses_[ci];
      if (c.ie && !ie_active_) {
        ws[j++] = ci;
        continue;
      }
      if (c.lits[0] == falsel) std::swap(c.lits[0], c.lits[1]);
      if (c.lits[1] != falsel) {
        // stale watch entry
        continue;
      }
      if (lit_value(c.lits[0]) > 0) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (lit_value(c.lits[k]) >= 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1].x].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (lit_value(c.lits[0]) < 0) {
        conflict = ci;
        while (i < ws.size()) ws[j++] = ws[i++];
        break;
      }
      assign(c.lits[0], ci);
    }
    ws.resize(j);
    if (conflict >= 0) return conflict;
  }
  return -1;
}

void Cdcl::sync_hooks() {
  for (size_t i = hook_synced_; i < trail_.size(); ++i) {
    Lit l = trail_[i];
    for (auto& hs : hooks_)
      if (hs.hook->owns(l.atom())) {
        hs.hook->assert_lit(l);
        hs.pos.push_back(i);
      }
  }
  hook_synced_ = trail_.size();
}

int Cdcl::lemma_clause(const std::vector<Lit>& eta, const std::string& tag) {
  Clause c;
  for (Lit l : eta) c.push_back(~l);
  normalize_clause(c);
  int node = proof_.add_lemma(c, tag);
  return add_clause(c, node, true);
}

int Cdcl::theory_step(bool& progressed) {
  progressed = false;
  sync_hooks();
  bool final_check = originals_assigned_ == originals_;
  std::vector<Lit> confl;
  for (auto& hs : hooks_) {
    confl.clear();
    if (!hs.hook->check(final_check, confl)) {
      if (confl.empty()) throw Error(hs.hook->tag() + " reported an empty conflict");
      return lemma_clause(confl, hs.hook->tag());
    }
  }
  if (!cfg_.theory_propagation) return -1;
  auto open = [&](AtomId a) {
    return a < val_.size() && relevant_[a] && val_[a] == 0 && (!ie_[a] || ie_phase_);
  };
  for (auto& hs : hooks_) {
    std::vector<Implication> imps;
    hs.hook->implied(open, imps);
    for (auto& im : imps) {
      int8_t v = lit_value(im.lit);
      if (v > 0) continue;
      Clause c{im.lit};
      for (Lit b : im.because) c.push_back(~b);
      normalize_clause(c);
      int node = proof_.add_lemma(c, hs.hook->tag());
      std::vector<Lit> lits{im.lit};
      for (Lit l : c)
        if (l != im.lit) lits.push_back(l);
      int ci = add_clause(std::move(lits), node, false);
      if (v < 0) return ci;
      assign(im.lit, ci);
      note(TrailEvent::TheoryProp, im.lit);
      progressed = true;
    }
    if (progressed) return -1;
  }
  return -1;
}

void Cdcl::bump(AtomId a) {
  activity_[a] += bump_inc_;
  if (activity_[a] > 1e100) {
    for (auto& x : activity_) x *= 1e-100;
    bump_inc_ *= 1e-100;
  }
}

void Cdcl::analyze(int ci, std::vector<Lit>& learnt, int& node, int& bj) {
  int L = 0;
  for (Lit l : clauses_[ci].lits) L = std::max(L, level(l));
  backtrack(L);
  learnt.assign(1, Lit());
  node = clauses_[ci].proof;
  int counter = 0;
  Lit p;
  int idx = static_cast<int>(trail_.size()) - 1;
  int cur = ci;
  while (true) {
    for (Lit q : clauses_[cur].lits) {
      if (p.valid() && q == p) continue;
      AtomId v = q.atom();
      if (seen_[v]) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] >= L) ++counter;
      else learnt.push_back(q);
    }
    while (!seen_[trail_[idx].atom()]) --idx;
    p = trail_[idx--];
    seen_[p.atom()] = 0;
    if (--counter == 0) break;
    cur = reason_[p.atom()];
    if (cur < 0) throw Error("conflict analysis reached a decision before the UIP");
    node = proof_.add_res(node, clauses_[cur].proof, p.atom());
  }
  learnt[0] = ~p;
  for (Lit l : learnt) seen_[l.atom()] = 0;
  bj = 0;
  size_t best = 0;
  for (size_t i = 1; i < learnt.size(); ++i)
    if (level(learnt[i]) > bj) {
      bj = level(learnt[i]);
      best = i;
    }
  if (best > 1) std::swap(learnt[1], learnt[best]);
  bump_inc_ *= 1.05;
  Clause check = learnt;
  normalize_clause(check);
  if (check != proof_.node(node).clause) throw Error("learned clause differs from its resolution chain");
}

int Cdcl::eliminate_ie(int ci) {
  int node = clauses_[ci].proof;
  Clause c = proof_.node(node).clause;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= 0 && clause_has_ie(c); --i) {
    Lit q = trail_[i];
    if (!ie_[q.atom()] || !clause_has(c, ~q)) continue;
    int r = reason_[q.atom()];
    if (r < 0) throw Error("interface equality decision below the phase boundary");
    node = proof_.add_res(node, clauses_[r].proof, q.atom());
    c = proof_.node(node).clause;
  }
  if (clause_has_ie(c)) throw Error("could not eliminate interface equalities from conflict");
  proof_.add_ie_root(node);
  return add_clause(c, node, true);
}

void Cdcl::refute(int ci) {
  int node = clauses_[ci].proof;
  Clause c = proof_.node(node).clause;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= 0 && !c.empty(); --i) {
    Lit q = trail_[i];
    if (!clause_has(c, ~q)) continue;
    int r = reason_[q.atom()];
    if (r < 0) throw Error("refutation reached a decision");
    node = proof_.add_res(node, clauses_[r].proof, q.atom());
    c = proof_.node(node).clause;
  }
  if (!c.empty()) throw Error("final resolution did not reach the empty clause");
  proof_.set_root(node);
}

bool Cdcl::handle_conflict(int ci) {
  note(TrailEvent::Conflict, Lit());
  if (ie_phase_) {
    int L = 0;
    for (Lit l : clauses_[ci].lits) L = std::max(L, level(l));
    bool has = clause_has_ie(clauses_[ci].lits);
    if (has && L >= ie_boundary_) {
      std::vector<Lit> learnt;
      int node, bj;
      analyze(ci, learnt, node, bj);
      bj = std::max(bj, ie_boundary_ - 1);
      backtrack(bj);
      note(TrailEvent::Backjump, learnt[0]);
      int nc = add_clause(learnt, node, true);
      assign(learnt[0], nc);
      return true;
    }
    if (has) ci = eliminate_ie(ci);
    leave_ie_phase();
  }
  int L = 0;
  for (Lit l : clauses_[ci].lits) L = std::max(L, level(l));
  if (L == 0) {
    refute(ci);
    return false;
  }
  std::vector<Lit> learnt;
  int node, bj;
  analyze(ci, learnt, node, bj);
  backtrack(bj);
  note(TrailEvent::Backjump, learnt[0]);
  int nc = add_clause(learnt, node, true);
  assign(learnt[0], nc);
  return true;
}

void Cdcl::backtrack(int lvl) {
  if (decision_level() <= lvl) return;
  size_t keep = trail_lim_[lvl];
  for (size_t i = trail_.size(); i-- > keep;) {
    AtomId a = trail_[i].atom();
    phase_[a] = !trail_[i].neg();
    val_[a] = 0;
    reason_[a] = -1;
    if (relevant_[a] && !ie_[a]) --originals_assigned_;
  }
  trail_.resize(keep);
  trail_lim_.resize(lvl);
  qhead_ = std::min(qhead_, keep);
  if (hook_synced_ > keep) hook_synced_ = keep;
  for (auto& hs : hooks_) {
    while (!hs.pos.empty() && hs.pos.back() >= keep) hs.pos.pop_back();
    hs.hook->backtrack(hs.pos.size());
  }
}

void Cdcl::leave_ie_phase() {
  ie_phase_ = false;
  ie_active_ = false;
  note(TrailEvent::LeaveIe, Lit());
}

void Cdcl::enter_ie_phase() {
  ie_phase_ = true;
  ie_active_ = true;
  ie_boundary_ = decision_level() + 1;
  note(TrailEvent::EnterIe, Lit());
  std::vector<int> ie_clauses;
  for (size_t ci = 0; ci < clauses_.size(); ++ci)
    if (clauses_[ci].ie) ie_clauses.push_back(static_cast<int>(ci));
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(), [&](int ci) { return clauses_[ci].ie; }), ws.end());
  for (int ci : ie_clauses) {
    bool reason_only = false;
    for (Lit l : clauses_[ci].lits)
      if (reason_[l.atom()] == ci) reason_only = true;
    attach(ci);
    (void)reason_only;
  }
}

Lit Cdcl::pick_branch() {
  int best = -1;
  for (size_t a = 0; a < val_.size(); ++a) {
    if (!relevant_[a] || ie_[a] || val_[a] != 0) continue;
    if (best < 0 || activity_[a] > activity_[best]) best = static_cast<int>(a);
  }
  if (best >= 0) return Lit::make(best, !phase_[best]);
  if (ie_phase_)
    for (size_t a = 0; a < val_.size(); ++a)
      if (ie_[a] && val_[a] == 0) return Lit::make(static_cast<AtomId>(a), true);
  return Lit();
}

void Cdcl::note(TrailEvent::Kind k, Lit l) {
  if (!cfg_.record_trail) return;
  TrailEvent e;
  e.kind = k;
  e.lit = l;
  e.level = decision_level();
  e.ie = l.valid() && ie_[l.atom()];
  e.open_originals = originals_ - originals_assigned_;
  log_.push_back(e);
}

int Cdcl::luby(int i) {
  int size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return 1 << seq;
}

SatStatus Cdcl::solve() {
  if (empty_input_ >= 0) {
    proof_.set_root(empty_input_);
    return SatStatus::Unsat;
  }
  for (int ci : units_) {
    Lit l = clauses_[ci].lits[0];
    int8_t v = lit_value(l);
    if (v == 0) {
      assign(l, ci);
    } else if (v < 0) {
      refute(ci);
      return SatStatus::Unsat;
    }
  }
  int restart_idx = 0;
  uint64_t restart_at = static_cast<uint64_t>(luby(0)) * cfg_.restart_base;
  uint64_t since_restart = 0;
  while (true) {
    if (cfg_.budget && conflicts_ + decisions_ > cfg_.budget) return SatStatus::Budget;
    int confl = propagate();
    if (confl < 0) {
      bool progressed = false;
      confl = theory_step(progressed);
      if (confl < 0 && progressed) continue;
    }
    if (confl >= 0) {
      ++conflicts_;
      ++since_restart;
      if (!handle_conflict(confl)) return SatStatus::Unsat;
      continue;
    }
    if (cfg_.restarts && !ie_phase_ && since_restart >= restart_at && decision_level() > 0) {
      backtrack(0);
      note(TrailEvent::Restart, Lit());
      since_restart = 0;
      restart_at = static_cast<uint64_t>(luby(++restart_idx)) * cfg_.restart_base;
      continue;
    }
    Lit d = pick_branch();
    if (!d.valid()) {
      if (cfg_.dtc && has_ie_ && !ie_phase_) {
        enter_ie_phase();
        // units of reactivated clauses
        int unit_conflict = -1;
        for (size_t ci = 0; ci < clauses_.size() && unit_conflict < 0; ++ci) {
          if (!clauses_[ci].ie) continue;
          auto& lits = clauses_[ci].lits;
          if (lits.empty()) continue;
          int8_t v0 = lit_value(lits[0]);
          bool rest_false = lits.size() == 1 || lit_value(lits[1]) < 0;
          if (v0 < 0) unit_conflict = static_cast<int>(ci);
          else if (v0 == 0 && rest_false) assign(lits[0], static_cast<int>(ci));
        }
        if (unit_conflict >= 0) {
          ++conflicts_;
          if (!handle_conflict(unit_conflict)) return SatStatus::Unsat;
        }
        continue;
      }
      sync_hooks();
      return SatStatus::Sat;
    }
    ++decisions_;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    assign(d, -1);
    note(TrailEvent::Decide, d);
  }
}

std::string Cdcl::trail_dump(const Context& ctx) const {
  std::ostringstream out;
  static const char* names[] = {"decide", "tprop", "conflict", "backjump", "enter-ie", "leave-ie", "restart"};
  for (auto& e : log_) {
    out << names[e.kind] << " level=" << e.level << " open=" << e.open_originals;
    if (e.lit.valid()) out << " ie=" << (e.ie ? 1 : 0) << " " << ctx.lit_str(e.lit);
    out << "\n";
  }
  return out.str();
}

}  // namespace smtitp
