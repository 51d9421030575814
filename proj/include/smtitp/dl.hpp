#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smtitp/graph.hpp"
#include "smtitp/la.hpp"

namespace smtitp {

// 0 <= sx*x + sy*y + k with unit coefficients; sy == 0 for a single-variable bound.
// The originating leaf term equals scale * (sx*x + sy*y) + scale * k.
struct UnitConstraint {
  TermId x = 0;
  int sx = 0;
  TermId y = 0;
  int sy = 0;
  Delta k;
  Rational scale;
  LaLeaf leaf;
};

// leaves of a literal in inequality form: both directions for a positive equality
std::vector<LaLeaf> ineq_leaves(const Context& ctx, Lit l);
std::optional<UnitConstraint> unit_constraint(const LaLeaf& leaf);
bool is_dl_shape(const UnitConstraint& c);
// integer rounding of the constant: weak k -> floor k, strict k -> ceil k - 1
Rational integer_bound(const Delta& k);

class DlSolver {
 public:
  DlSolver(const Context& ctx, bool integer);

  // throws on literals outside difference logic
  void assert_lit(Lit l);
  bool check();
  void backtrack(size_t keep);
  size_t num_asserted() const { return lits_.size(); }

  // literals of the last negative cycle in walk order, without repeats
  const std::vector<Lit>& conflict() const { return conflict_; }
  std::map<TermId, Rational> model() const;
  std::string dot(const std::function<Side(Lit)>& side) const;
  const ConstraintGraph& graph() const { return g_; }

 private:
  int vertex(TermId t);

  const Context& ctx_;
  bool integer_;
  ConstraintGraph g_;
  std::map<TermId, int> vid_;
  std::vector<TermId> vterm_;
  std::vector<Lit> lits_;
  std::vector<size_t> edge_marks_;
  std::vector<Lit> conflict_;
};

// graph edges of the literals in eta, tagged by position
void dl_build(const Context& ctx, const std::vector<Lit>& eta, bool integer, ConstraintGraph& g,
              std::vector<TermId>& vterm);

// Summary-constraint interpolant of an inconsistent set of DL literals.
Formula dl_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides, bool integer);

// Comb chain with unit weights along the negative cycle of eta (rational semantics)
std::optional<LaProof> dl_cycle_proof(const Context& ctx, const std::vector<Lit>& eta);

// value assignment with epsilon replaced by a small enough rational
std::map<TermId, Rational> concretize(const std::vector<std::pair<TermId, Delta>>& values,
                                      const std::vector<std::pair<Delta, Delta>>& must_leq);

class DlHook : public TheoryHook {
 public:
  DlHook(const Context& ctx, bool integer) : solver_(ctx, integer), integer_(integer) {}
  std::string tag() const override { return integer_ ? "DL-Z" : "DL"; }
  bool owns(AtomId a) const override { return owned_.count(a) > 0; }
  void own(AtomId a) { owned_.insert(a); }
  void assert_lit(Lit l) override { solver_.assert_lit(l); }
  void backtrack(size_t keep) override { solver_.backtrack(keep); }
  bool check(bool final_check, std::vector<Lit>& conflict) override;
  DlSolver& solver() { return solver_; }

 private:
  DlSolver solver_;
  bool integer_;
  std::set<AtomId> owned_;
};

}  // namespace smtitp
