#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smtitp/partition.hpp"
#include "smtitp/sat.hpp"

namespace smtitp {

// Inequality 0 <= t + e*eps taken from a literal. dir selects the direction of an equality.
struct LaLeaf {
  Lit lit;
  int dir = 1;
  bool from_eq = false;
  LinTerm t;
  Rational e;
};

// leaf form of a bound-like literal; nullopt for disequalities and non-arithmetic atoms
std::optional<LaLeaf> la_leaf(const Context& ctx, Lit l, int dir = 1);
// the linear term of an Eq or arithmetic TEq atom, 0 = t
LinTerm la_eq_term(const Context& ctx, AtomId a);
bool la_is_diseq(const Context& ctx, Lit l);

class LaProof {
 public:
  struct Node {
    bool leaf = true;
    LaLeaf hyp;
    int l = -1, r = -1;  // r < 0: a single scaled premise
    Rational c1, c2;
  };

  int add_leaf(LaLeaf h);
  int add_comb(int l, int r, Rational c1, Rational c2);
  const Node& node(int i) const { return nodes_[i]; }
  size_t size() const { return nodes_.size(); }
  int root() const { return root_; }
  void set_root(int r) { root_ = r; }

  // (t, e) such that the node proves 0 <= t + e*eps; leaves selected by zero are replaced by 0 <= 0
  std::pair<LinTerm, Rational> eval(int n, const std::function<bool(const LaLeaf&)>& zero = nullptr) const;
  std::vector<Lit> leaves() const;
  std::string str(const Context& ctx) const;

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
};

class LaSolver {
 public:
  explicit LaSolver(const Context& ctx);

  // false on an immediate bound clash; the clash stays pending until backtracked
  bool assert_lit(Lit l);
  bool assert_leaf(const LaLeaf& leaf);
  // simplex, then (on a full check) the disequalities in assertion order
  bool check(bool full = true);
  size_t num_asserted() const { return lit_marks_.size(); }
  void backtrack(size_t keep);

  const std::vector<Lit>& conflict() const { return conflict_; }
  // proof of the last bound or row conflict, not set for disequality conflicts
  const LaProof& conflict_proof() const { return proof_; }
  bool conflict_has_proof() const { return conflict_proof_ok_; }

  // true when the asserted literals entail a = b; because receives a supporting literal set
  bool entails_eq(const LinTerm& a, const LinTerm& b, std::vector<Lit>& because);

  std::map<TermId, Rational> model() const;
  bool invariant_ok() const;
  size_t num_pivots() const { return pivots_; }
  std::string tableau_str() const;
  // one line per bounded slack, e.g. "-1 <= s1"
  std::string bounds_str() const;
  Delta value_of(TermId t) const;

 private:
  struct Bound {
    bool set = false;
    Delta v;
    LaLeaf src;
    Rational k;  // coefficient of the slack in src.t
  };
  struct Var {
    bool slack = false;
    TermId term = 0;
    int created = 0;
    Bound lo, hi;
    Delta beta;
    bool basic = false;
  };
  struct Undo {
    int var;
    bool upper;
    Bound old;
  };

  int original(TermId t);
  int slack_for(const LinTerm& lin, Rational& k);
  bool before(int u, int v) const;
  bool set_bound(int v, bool upper, const Delta& val, const LaLeaf& src, const Rational& k);
  void update(int x, const Delta& val);
  void pivot(int basic, int nonbasic);
  void pivot_and_update(int basic, int nonbasic, const Delta& val);
  bool simplex();
  void row_conflict(int x, bool lower_violated);
  void restore(size_t undo_size);
  bool strict_probe(const LinTerm& t, std::vector<Lit>& conflict);

  const Context& ctx_;
  std::vector<Var> vars_;
  std::vector<std::map<int, Rational>> rows_;  // indexed by basic var
  std::map<TermId, int> orig_;
  std::map<std::vector<std::pair<TermId, Rational>>, std::pair<int, Rational>> slack_index_;
  int slack_count_ = 0;
  std::vector<Undo> undo_;
  struct Mark {
    size_t undo;
    size_t diseqs;
  };
  std::vector<Mark> lit_marks_;
  std::vector<Lit> diseqs_;
  std::vector<Lit> conflict_;
  LaProof proof_;
  bool conflict_proof_ok_ = false;
  size_t clash_at_ = SIZE_MAX;  // index of the literal whose bound clashed
  std::vector<Lit> clash_;
  LaProof clash_proof_;
  size_t pivots_ = 0;
};

// Interpolant of an inconsistent literal set, sides given per literal.
struct LaItpOptions {
  bool strengthen = false;
  bool primitive = false;  // scale each atom to integer coefficients
};

Formula la_interpolate_proof(Context& ctx, const LaProof& p, const std::function<Side(Lit)>& side,
                             const LaItpOptions& opt = {});
Formula la_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides,
                       const LaItpOptions& opt = {});
// refutation proof of a literal set without disequalities
std::optional<LaProof> la_refute(const Context& ctx, const std::vector<Lit>& lits);
bool la_unsat(const Context& ctx, const std::vector<Lit>& lits);

// t over AB-common symbols with A-part |= a = t and B-part |= t = b; nullopt when none found
std::optional<LinTerm> la_interpolating_term(Context& ctx, const LinTerm& a, const LinTerm& b,
                                             const std::vector<Lit>& mu, const std::vector<Side>& sides);

class LaHook : public TheoryHook {
 public:
  explicit LaHook(const Context& ctx) : ctx_(ctx), solver_(ctx) {}
  std::string tag() const override { return "LA"; }
  bool owns(AtomId a) const override { return owned_.count(a) > 0; }
  void own(AtomId a) { owned_.insert(a); }
  void add_interface(AtomId a) { ie_atoms_.push_back(a); }
  void assert_lit(Lit l) override;
  void backtrack(size_t keep) override;
  bool check(bool final_check, std::vector<Lit>& conflict) override;
  void implied(const std::function<bool(AtomId)>& open, std::vector<Implication>& out) override;
  LaSolver& solver() { return solver_; }

 private:
  const Context& ctx_;
  LaSolver solver_;
  std::set<AtomId> owned_;
  std::vector<AtomId> ie_atoms_;
};

}  // namespace smtitp
