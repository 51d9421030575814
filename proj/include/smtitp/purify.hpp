#pragma once

#include <map>
#include <utility>
#include <vector>

#include "smtitp/formula.hpp"

namespace smtitp {

// Separates EUF and LA: UF applications inside arithmetic atoms and arithmetic
// terms under UF applications are named by fresh variables. Names are shared
// within one label and never across labels.
class Purifier {
 public:
  explicit Purifier(Context& ctx) : ctx_(ctx) {}

  // purified formula conjoined with the definitions it needs
  Formula purify(const Formula& f, int label);
  const std::vector<std::pair<AtomId, int>>& definitions() const { return defs_; }

 private:
  Formula atom(AtomId a, int label, std::vector<Formula>& defs);
  LinTerm arith(const LinTerm& t, int label, std::vector<Formula>& defs);
  TermId euf(TermId t, int label, std::vector<Formula>& defs);
  TermId name(TermId t, int label, std::vector<Formula>& defs);

  Context& ctx_;
  std::map<std::pair<TermId, int>, TermId> names_;
  std::vector<std::pair<AtomId, int>> defs_;
};

bool is_euf_term(const Context& ctx, TermId t);

}  // namespace smtitp
