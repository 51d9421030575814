#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "smtitp/proof.hpp"

namespace smtitp {

struct Implication {
  Lit lit;
  std::vector<Lit> because;  // asserted literals entailing lit
};

class TheoryHook {
 public:
  virtual ~TheoryHook() = default;
  virtual std::string tag() const = 0;
  virtual bool owns(AtomId a) const = 0;
  virtual void assert_lit(Lit l) = 0;
  // keep only the first `keep` asserted literals
  virtual void backtrack(size_t keep) = 0;
  // false on inconsistency, with the conflicting asserted literals in `conflict`
  virtual bool check(bool final_check, std::vector<Lit>& conflict) = 0;
  virtual void implied(const std::function<bool(AtomId)>& open, std::vector<Implication>& out) {
    (void)open;
    (void)out;
  }
};

struct SatConfig {
  bool dtc = false;
  bool restarts = true;
  int restart_base = 64;
  uint64_t budget = 0;  // decisions + conflicts, 0 = unlimited
  uint64_t seed = 0;
  bool theory_propagation = true;
  bool record_trail = false;
};

enum class SatStatus { Sat, Unsat, Budget };

struct TrailEvent {
  enum Kind { Decide, TheoryProp, Conflict, Backjump, EnterIe, LeaveIe, Restart } kind;
  Lit lit;
  int level = 0;
  bool ie = false;
  int open_originals = 0;
};

class Cdcl {
 public:
  Cdcl(const Context& ctx, Proof& proof, SatConfig cfg = {});

  void add_hook(TheoryHook* h);
  void mark_interface(AtomId a);
  bool is_interface(AtomId a) const { return a < ie_.size() && ie_[a]; }
  void add_input(Clause c, int part);

  SatStatus solve();

  int8_t value(AtomId a) const { return a < val_.size() ? val_[a] : 0; }
  const std::vector<int8_t>& model() const { return val_; }
  const std::vector<TrailEvent>& trail_log() const { return log_; }
  std::string trail_dump(const Context& ctx) const;
  uint64_t num_conflicts() const { return conflicts_; }
  uint64_t num_decisions() const { return decisions_; }

 private:
  struct ClauseRec {
    std::vector<Lit> lits;
    int proof;
    bool ie;
  };
  struct HookState {
    TheoryHook* hook;
    std::vector<size_t> pos;  // trail positions of asserted literals
  };

  void ensure(AtomId a);
  int8_t lit_value(Lit l) const;
  int level(Lit l) const { return level_[l.atom()]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void assign(Lit l, int reason);
  int add_clause(std::vector<Lit> lits, int proof, bool watch);
  void attach(int ci);
  int propagate();
  int theory_step(bool& progressed);
  int lemma_clause(const std::vector<Lit>& eta, const std::string& tag);
  bool handle_conflict(int ci);
  void analyze(int ci, std::vector<Lit>& learnt, int& node, int& bj);
  int eliminate_ie(int ci);
  void refute(int ci);
  void backtrack(int lvl);
  void sync_hooks();
  void enter_ie_phase();
  void leave_ie_phase();
  Lit pick_branch();
  void bump(AtomId a);
  void note(TrailEvent::Kind k, Lit l);
  bool clause_has_ie(const std::vector<Lit>& lits) const;
  static int luby(int i);

  const Context& ctx_;
  Proof& proof_;
  SatConfig cfg_;
  std::vector<HookState> hooks_;

  std::vector<int8_t> val_;
  std::vector<int> level_, reason_;
  std::vector<char> relevant_, ie_, phase_, seen_;
  std::vector<double> activity_;
  double bump_inc_ = 1.0;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<ClauseRec> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> units_;
  int empty_input_ = -1;
  size_t hook_synced_ = 0;

  bool ie_phase_ = false;
  bool ie_active_ = false;
  bool has_ie_ = false;
  int ie_boundary_ = 0;
  int originals_ = 0, originals_assigned_ = 0;

  uint64_t conflicts_ = 0, decisions_ = 0;
  std::vector<TrailEvent> log_;
  std::mt19937_64 rng_;
};

}  // namespace smtitp
