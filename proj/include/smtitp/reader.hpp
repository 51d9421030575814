#pragma once

#include <string>
#include <vector>

#include "smtitp/formula.hpp"

namespace smtitp {

struct SExpr {
  bool is_list = false;
  std::string text;
  std::vector<SExpr> items;
  int line = 0, col = 0;

  bool is(const std::string& s) const { return !is_list && text == s; }
  bool head(const std::string& s) const { return is_list && !items.empty() && items[0].is(s); }
  std::string str() const;
};

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg);
  int line, col;
};

std::vector<SExpr> parse_sexprs(const std::string& text);

// Terms and formulas against a context; declarations extend it.
class Reader {
 public:
  explicit Reader(Context& ctx) : ctx_(ctx) {}

  // declare-var, declare-fun, declare-sort; false if e is not a declaration
  bool declaration(const SExpr& e);
  TermId term(const SExpr& e);
  Formula formula(const SExpr& e);
  SortId sort(const SExpr& e);

 private:
  LinTerm arith(const SExpr& e);
  Formula relation(const SExpr& e);
  Formula equality(const SExpr& a, const SExpr& b);
  [[noreturn]] void fail(const SExpr& e, const std::string& msg) const;

  Context& ctx_;
};

}  // namespace smtitp
