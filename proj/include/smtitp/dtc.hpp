#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "smtitp/proof.hpp"
#include "smtitp/sat.hpp"

namespace smtitp {

// Interface variables occur in both the EUF and the LA slice after purification.
struct InterfaceCatalog {
  std::vector<TermId> vars;
  std::vector<AtomId> eqs;  // pairwise equalities between interface variables
  std::set<AtomId> ie;      // eqs plus the equalities introduced by splitting

  bool contains(AtomId a) const { return ie.count(a) > 0; }
  // A-only, B-only or Mixed (AB-mixed) per equality for the cut after part k
  std::map<AtomId, Side> classify(const Context& ctx, const Partition& part, int k) const;
};

struct DtcRun {
  SatStatus status = SatStatus::Sat;
  Proof raw;    // as produced by the search
  Proof proof;  // linearized
  Partition partition{1};
  InterfaceCatalog catalog;
  std::map<TermId, Rational> model;  // arithmetic values when sat
  std::vector<TrailEvent> trail;  // filled when cfg.record_trail is set
  std::string trail_text;
  uint64_t conflicts = 0, decisions = 0;
  size_t regions_rebuilt = 0;
};

// Purifies and searches with interface equalities delayed; cfg.dtc is forced on.
DtcRun run_dtc(Context& ctx, const std::vector<Formula>& parts, SatConfig cfg = {});
bool dtc_unsat(Context& ctx, const Formula& f, uint64_t budget = 0);

// A region is a maximal group of resolutions on interface equalities, rooted at
// a clause without interface equalities, whose leaves are theory lemmas.
struct IeRegion {
  int root = -1;
  std::vector<int> inner;
  std::vector<int> leaves;
};

struct IeAudit {
  bool ok = true;
  std::string message;
  std::vector<IeRegion> regions;
};

// Checks the region conditions; require_linear adds that every right premise is a leaf.
IeAudit audit_ie_local(const Proof& p, const std::set<AtomId>& ie, bool require_linear = true);

// Turns every region into a left-deep chain over its leaves; region roots keep their index.
Proof linearize_ie_subproofs(const Proof& p, const std::set<AtomId>& ie, size_t* rebuilt = nullptr);

struct SplitRecord {
  AtomId eq = 0;  // the AB-mixed equality a = b
  TermId a = 0, b = 0, t = 0;
  AtomId left = 0, right = 0;  // a = t and t = b
  std::string theory;
  Clause c1, c2;  // the two lemmas replacing the deduction
};

struct SplitStats {
  std::vector<SplitRecord> splits;
  size_t nodes_before = 0, nodes_after = 0;
};

// Removes AB-mixed interface equalities from a linear proof; new equalities are added to ie.
Proof split_ab_mixed(Context& ctx, const Proof& p, const Partition& part, int k, std::set<AtomId>& ie,
                     SplitStats* stats = nullptr);

// One interpolant per cut, each from its own split of the shared base proof.
std::vector<Formula> interpolate_combined(Context& ctx, const DtcRun& run, const LemmaItp& itp,
                                          std::vector<SplitStats>* stats = nullptr);

}  // namespace smtitp
