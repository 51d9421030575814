#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smtitp/rational.hpp"

namespace smtitp {

using SortId = uint32_t;
using SymId = uint32_t;
using TermId = uint32_t;
using AtomId = uint32_t;

constexpr SortId kBoolSort = 0;
constexpr SortId kRealSort = 1;
constexpr SortId kIntSort = 2;

struct Symbol {
  std::string name;
  std::vector<SortId> args;
  SortId ret = kRealSort;
  int label = 0;  // partition label for solver-introduced symbols, 0 otherwise
};

// Sorted (term, coefficient) monomials plus a constant. Monomials are Var or App terms.
struct LinTerm {
  std::vector<std::pair<TermId, Rational>> mons;
  Rational c;

  static LinTerm constant(const Rational& q);
  static LinTerm of(TermId t, const Rational& k = 1);

  void add(const LinTerm& o, const Rational& k = 1);
  LinTerm scaled(const Rational& k) const;
  LinTerm operator+(const LinTerm& o) const;
  LinTerm operator-(const LinTerm& o) const;
  LinTerm operator-() const { return scaled(-1); }
  bool is_const() const { return mons.empty(); }
  Rational coeff(TermId t) const;
  bool operator==(const LinTerm& o) const { return c == o.c && mons == o.mons; }
  bool operator!=(const LinTerm& o) const { return !(*this == o); }
  // the monomial part with the constant dropped
  LinTerm linear_part() const;
  // positive factor that makes every coefficient and the constant integral with gcd 1
  Rational primitive_factor() const;
};

enum class TermKind : uint8_t { Var, Const, App, Lin };

struct TermNode {
  TermKind kind;
  SortId sort;
  SymId sym = 0;
  std::vector<TermId> args;
  Rational value;
  LinTerm lin;
};

enum class AtomKind : uint8_t { Bool, Leq, Lt, Eq, TEq };

// Leq: 0 <= lin, Lt: 0 < lin, Eq: 0 = lin, TEq: lhs = rhs
struct AtomNode {
  AtomKind kind;
  SymId sym = 0;
  LinTerm lin;
  TermId lhs = 0, rhs = 0;
};

struct Lit {
  uint32_t x = UINT32_MAX;

  Lit() = default;
  static Lit make(AtomId a, bool neg = false) { return Lit(a * 2 + (neg ? 1u : 0u)); }
  AtomId atom() const { return x >> 1; }
  bool neg() const { return x & 1u; }
  Lit operator~() const { return Lit(x ^ 1u); }
  bool operator==(const Lit& o) const { return x == o.x; }
  bool operator!=(const Lit& o) const { return x != o.x; }
  bool operator<(const Lit& o) const { return x < o.x; }
  bool valid() const { return x != UINT32_MAX; }

 private:
  explicit Lit(uint32_t v) : x(v) {}
};

using Clause = std::vector<Lit>;

// sort + dedup; returns false for a tautology
bool normalize_clause(Clause& c);
bool clause_has(const Clause& c, Lit l);

class Context {
 public:
  Context();

  SortId declare_sort(const std::string& name);
  std::optional<SortId> find_sort(const std::string& name) const;
  const std::string& sort_name(SortId s) const { return sorts_[s]; }

  SymId declare_fun(const std::string& name, std::vector<SortId> args, SortId ret, int label = 0);
  std::optional<SymId> find_symbol(const std::string& name) const;
  const Symbol& symbol(SymId s) const { return syms_[s]; }
  size_t num_symbols() const { return syms_.size(); }
  // fresh symbol whose name does not clash with user names
  SymId fresh_symbol(const std::string& prefix, SortId ret, int label);

  TermId mk_var(SymId s);
  TermId mk_const(const Rational& q);
  TermId mk_app(SymId f, std::vector<TermId> args);
  // canonical: collapses to Const or a single monomial with coefficient 1
  TermId mk_lin(const LinTerm& t);
  LinTerm lin_of(TermId t) const;
  const TermNode& term(TermId t) const { return terms_[t]; }
  size_t num_terms() const { return terms_.size(); }
  SortId sort_of(TermId t) const { return terms_[t].sort; }
  bool is_arith_sort(SortId s) const { return s == kRealSort || s == kIntSort; }

  AtomId mk_bool_atom(SymId p);
  AtomId mk_leq(const LinTerm& t);
  AtomId mk_lt(const LinTerm& t);
  AtomId mk_eq(const LinTerm& t);
  AtomId mk_teq(TermId a, TermId b);
  const AtomNode& atom(AtomId a) const { return atoms_[a]; }
  size_t num_atoms() const { return atoms_.size(); }
  bool is_arith_atom(AtomId a) const;

  std::vector<SymId> term_symbols(TermId t) const;
  std::vector<SymId> atom_symbols(AtomId a) const;

  std::string term_str(TermId t) const;
  std::string lin_str(const LinTerm& t) const;
  std::string atom_str(AtomId a) const;
  std::string lit_str(Lit l) const;

 private:
  AtomId intern_atom(AtomNode n, const std::string& key);
  TermId intern_term(TermNode n, const std::string& key);
  std::string lin_key(const LinTerm& t) const;

  std::vector<std::string> sorts_;
  std::vector<Symbol> syms_;
  std::unordered_map<std::string, SymId> sym_index_;
  std::vector<TermNode> terms_;
  std::unordered_map<std::string, TermId> term_index_;
  std::vector<AtomNode> atoms_;
  std::unordered_map<std::string, AtomId> atom_index_;
  std::vector<std::vector<SymId>> term_syms_;
  std::vector<std::vector<SymId>> atom_syms_;
  uint32_t fresh_counter_ = 0;
};

}  // namespace smtitp
