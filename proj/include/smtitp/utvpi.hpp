#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smtitp/dl.hpp"

namespace smtitp {

// Signed-variable graph: vertex 2i is x_i+, 2i+1 is x_i-. Each constraint becomes
// a dual edge pair, a single-variable bound one edge of doubled weight.
class UtvpiEncoding {
 public:
  UtvpiEncoding(const Context& ctx, bool integer) : ctx_(ctx), integer_(integer) {}

  // throws on literals that are not unit two-variable constraints
  void add(Lit l, int tag);
  void truncate(size_t keep_edges) { g_.truncate(keep_edges); }

  const ConstraintGraph& graph() const { return g_; }
  bool integer() const { return integer_; }
  int pos(TermId x);
  static int flip(int v) { return v ^ 1; }
  TermId var_of(int v) const { return vars_[v / 2]; }
  bool is_pos(int v) const { return (v & 1) == 0; }
  // signed variable as a linear term
  LinTerm upsilon(int v) const;
  // 0 <= up(v) - up(u) + w, halved when both ends name the same variable
  LinTerm summary_term(int u, int v, const Rational& w) const;
  std::string vertex_name(int v) const;
  size_t num_vars() const { return vars_.size(); }

 private:
  const Context& ctx_;
  bool integer_;
  ConstraintGraph g_;
  std::map<TermId, int> idx_;
  std::vector<TermId> vars_;
};

// Zero-weight cycle through x+ and x- whose x- ~> x+ part has odd weight.
struct ZeroCycle {
  TermId var = 0;
  std::vector<int> walk;  // edges, starting at x-
  size_t split = 0;       // walk[0, split) runs x- ~> x+, the rest x+ ~> x-
  Rational neg_to_pos, pos_to_neg;
};

std::optional<ZeroCycle> find_zero_cycle(const UtvpiEncoding& enc);

class UtvpiSolver {
 public:
  UtvpiSolver(const Context& ctx, bool integer);

  void assert_lit(Lit l);
  // rational check always; the integer layer only when full is set
  bool check(bool full = true);
  void backtrack(size_t keep);
  size_t num_asserted() const { return lits_.size(); }
  const std::vector<Lit>& conflict() const { return conflict_; }
  bool last_conflict_integer() const { return conflict_z_; }
  std::map<TermId, Rational> model();
  const UtvpiEncoding& encoding() const { return enc_; }

 private:
  const Context& ctx_;
  bool integer_;
  UtvpiEncoding enc_;
  std::vector<Lit> lits_;
  std::vector<size_t> edge_marks_;
  std::vector<Lit> conflict_;
  bool conflict_z_ = false;
};

// 0: rational negative cycle, 1..4: the integer cases
struct UtvpiItpInfo {
  int ucase = 0;
  TermId var = 0;
  std::string var_name;
};

Formula utvpi_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides, bool integer,
                          UtvpiItpInfo* info = nullptr);
// case selection for a witness; sides indexed by edge tag
int utvpi_classify(const Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides,
                   const UtvpiEncoding& enc, const ZeroCycle& w);
bool utvpi_unsat(const Context& ctx, const std::vector<Lit>& lits, bool integer);

class UtvpiHook : public TheoryHook {
 public:
  UtvpiHook(const Context& ctx, bool integer) : solver_(ctx, integer), integer_(integer) {}
  std::string tag() const override { return integer_ ? "UTVPI-Z" : "UTVPI"; }
  bool owns(AtomId a) const override { return owned_.count(a) > 0; }
  void own(AtomId a) { owned_.insert(a); }
  void assert_lit(Lit l) override { solver_.assert_lit(l); }
  void backtrack(size_t keep) override { solver_.backtrack(keep); }
  bool check(bool final_check, std::vector<Lit>& conflict) override;
  UtvpiSolver& solver() { return solver_; }

 private:
  UtvpiSolver solver_;
  bool integer_;
  std::set<AtomId> owned_;
};

}  // namespace smtitp
