#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smtitp/partition.hpp"
#include "smtitp/sat.hpp"

namespace smtitp {

// One step of an equality chain. Input steps carry the asserted literal,
// congruence steps join two applications of the same symbol.
struct EqStep {
  TermId u, v;
  Lit lit;
  bool congruence = false;
};

struct EqChain {
  std::vector<TermId> terms;
  std::vector<EqStep> steps;  // steps[i] joins terms[i] and terms[i+1]
};

// Congruence closure over TEq literals. Terms that are not applications are opaque.
class CongruenceClosure {
 public:
  explicit CongruenceClosure(const Context& ctx) : ctx_(ctx) {}

  void assert_lit(Lit l);
  bool check();
  void backtrack(size_t keep);
  size_t num_asserted() const { return lits_.size(); }
  const std::vector<Lit>& conflict() const { return conflict_; }

  bool equal(TermId a, TermId b);
  // input literals entailing a = b, which must hold
  std::vector<Lit> explain(TermId a, TermId b);
  EqChain chain(TermId a, TermId b);
  TermId representative(TermId t);

 private:
  struct Edge {
    int to = -1;
    Lit lit;
    int cu = -1, cv = -1;  // congruent applications
  };

  int node(TermId t);
  int find(int n) const;
  void merge(int a, int b, Lit lit, int cu, int cv);
  void process();
  std::vector<int> signature(int n) const;
  std::vector<int> forest_path(int a, int b) const;
  void explain_into(int a, int b, std::set<int>& done, std::vector<Lit>& out) const;
  void replay();

  struct Pending {
    int a, b;
    Lit lit;
    int cu, cv;
  };

  const Context& ctx_;
  std::vector<Lit> lits_;
  std::vector<Lit> conflict_;
  std::map<TermId, int> ids_;
  std::vector<TermId> term_;
  std::vector<int> rep_;
  std::vector<std::vector<int>> members_, parents_;
  std::vector<Edge> forest_;
  std::map<std::pair<SymId, std::vector<int>>, int> table_;
  std::vector<Pending> pending_;
  std::vector<std::pair<std::pair<int, int>, Lit>> diseqs_;
};

bool euf_unsat(const Context& ctx, const std::vector<Lit>& lits);

// Interpolant of an inconsistent set of EUF literals; sides per literal.
Formula euf_interpolate(Context& ctx, const std::vector<Lit>& eta, const std::vector<Side>& sides);

// Shared term t on the chain from a to b with mu |= a = t and mu |= t = b. Without `shared`,
// a symbol is shared when it occurs on both sides of mu.
std::optional<TermId> euf_interpolating_term(Context& ctx, TermId a, TermId b, const std::vector<Lit>& mu,
                                             const std::vector<Side>& sides,
                                             const std::function<bool(SymId)>& shared = nullptr);

class EufHook : public TheoryHook {
 public:
  explicit EufHook(const Context& ctx) : ctx_(ctx), cc_(ctx) {}
  std::string tag() const override { return "EUF"; }
  bool owns(AtomId a) const override { return owned_.count(a) > 0; }
  void own(AtomId a) { owned_.insert(a); }
  void add_interface(AtomId a) { ie_atoms_.push_back(a); }
  void assert_lit(Lit l) override { cc_.assert_lit(l); }
  void backtrack(size_t keep) override { cc_.backtrack(keep); }
  bool check(bool final_check, std::vector<Lit>& conflict) override;
  void implied(const std::function<bool(AtomId)>& open, std::vector<Implication>& out) override;
  CongruenceClosure& closure() { return cc_; }

 private:
  const Context& ctx_;
  CongruenceClosure cc_;
  std::set<AtomId> owned_;
  std::vector<AtomId> ie_atoms_;
};

}  // namespace smtitp
