#include "smtitp/reader.hpp"

#include <cctype>

namespace smtitp {

ParseError::ParseError(int l, int c, const std::string& msg)
    : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

std::string SExpr::str() const {
  if (!is_list) return text;
  std::string s = "(";
  for (size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i].str();
  return s + ")";
}

std::vector<SExpr> parse_sexprs(const std::string& text) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](char ch) {
    if (ch == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(ch);
      ++i;
    } else if (ch == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (ch == '(') {
      SExpr e;
      e.is_list = true;
      e.line = line;
      e.col = col;
      stack.push_back(std::move(e));
      advance(ch);
      ++i;
    } else if (ch == ')') {
      if (stack.empty()) throw ParseError(line, col, "unexpected ')'");
      SExpr e = std::move(stack.back());
      stack.pop_back();
      (stack.empty() ? top : stack.back().items).push_back(std::move(e));
      advance(ch);
      ++i;
    } else {
      SExpr e;
      e.line = line;
      e.col = col;
      if (ch == '|') {
        size_t j = text.find('|', i + 1);
        if (j == std::string::npos) throw ParseError(line, col, "unterminated '|'");
        e.text = text.substr(i + 1, j - i - 1);
        for (; i <= j; ++i) advance(text[i]);
      } else {
        size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
               text[j] != ')' && text[j] != ';')
          ++j;
        e.text = text.substr(i, j - i);
        for (; i < j; ++i) advance(text[i]);
      }
      (stack.empty() ? top : stack.back().items).push_back(std::move(e));
    }
  }
  if (!stack.empty()) throw ParseError(stack.back().line, stack.back().col, "unbalanced '('");
  return top;
}

namespace {

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.');
}

}  // namespace

void Reader::fail(const SExpr& e, const std::string& msg) const { throw ParseError(e.line, e.col, msg); }

SortId Reader::sort(const SExpr& e) {
  if (e.is_list) fail(e, "expected a sort");
  auto s = ctx_.find_sort(e.text);
  if (!s) fail(e, "unknown sort '" + e.text + "'");
  return *s;
}

bool Reader::declaration(const SExpr& e) {
  if (e.head("declare-var") || e.head("declare-const")) {
    if (e.items.size() != 3 || e.items[1].is_list) fail(e, "malformed declare-var");
    try {
      ctx_.declare_fun(e.items[1].text, {}, sort(e.items[2]));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      fail(e, err.what());
    }
    return true;
  }
  if (e.head("declare-fun")) {
    if (e.items.size() != 4 || e.items[1].is_list || !e.items[2].is_list) fail(e, "malformed declare-fun");
    std::vector<SortId> args;
    for (auto& a : e.items[2].items) args.push_back(sort(a));
    try {
      ctx_.declare_fun(e.items[1].text, std::move(args), sort(e.items[3]));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      fail(e, err.what());
    }
    return true;
  }
  if (e.head("declare-sort")) {
    if (e.items.size() < 2 || e.items[1].is_list) fail(e, "malformed declare-sort");
    try {
      ctx_.declare_sort(e.items[1].text);
    } catch (const Error& err) {
      fail(e, err.what());
    }
    return true;
  }
  return false;
}

LinTerm Reader::arith(const SExpr& e) {
  if (!e.is_list) {
    if (looks_numeric(e.text)) {
      try {
        return LinTerm::constant(parse_rational(e.text));
      } catch (const Error& err) {
        fail(e, err.what());
      }
    }
    TermId t = term(e);
    if (!ctx_.is_arith_sort(ctx_.sort_of(t))) fail(e, "'" + e.text + "' is not arithmetic");
    return ctx_.lin_of(t);
  }
  if (e.items.empty()) fail(e, "empty term");
  const std::string& op = e.items[0].text;
  size_t n = e.items.size();
  if (e.items[0].is_list) fail(e, "bad operator");
  if (op == "+") {
    LinTerm s;
    for (size_t i = 1; i < n; ++i) s.add(arith(e.items[i]));
    return s;
  }
  if (op == "-") {
    if (n == 2) return -arith(e.items[1]);
    if (n < 2) fail(e, "'-' needs arguments");
    LinTerm s = arith(e.items[1]);
    for (size_t i = 2; i < n; ++i) s.add(arith(e.items[i]), -1);
    return s;
  }
  if (op == "*") {
    LinTerm prod = LinTerm::constant(1);
    for (size_t i = 1; i < n; ++i) {
      LinTerm f = arith(e.items[i]);
      if (f.is_const()) prod = prod.scaled(f.c);
      else if (prod.is_const()) prod = f.scaled(prod.c);
      else fail(e, "non-linear multiplication");
    }
    return prod;
  }
  if (op == "/") {
    if (n != 3) fail(e, "'/' takes two arguments");
    LinTerm num = arith(e.items[1]), den = arith(e.items[2]);
    if (!den.is_const() || den.c == 0) fail(e, "division by a non-constant or zero");
    return num.scaled(1 / den.c);
  }
  TermId t = term(e);
  if (!ctx_.is_arith_sort(ctx_.sort_of(t))) fail(e, "expected an arithmetic term");
  return ctx_.lin_of(t);
}

TermId Reader::term(const SExpr& e) {
  if (!e.is_list) {
    if (looks_numeric(e.text)) return ctx_.mk_lin(arith(e));
    auto s = ctx_.find_symbol(e.text);
    if (!s) fail(e, "undeclared symbol '" + e.text + "'");
    if (!ctx_.symbol(*s).args.empty()) fail(e, "'" + e.text + "' needs arguments");
    return ctx_.mk_var(*s);
  }
  if (e.items.empty() || e.items[0].is_list) fail(e, "bad term");
  const std::string& op = e.items[0].text;
  if (op == "+" || op == "-" || op == "*" || op == "/") return ctx_.mk_lin(arith(e));
  auto s = ctx_.find_symbol(op);
  if (!s) fail(e, "undeclared function '" + op + "'");
  std::vector<TermId> args;
  for (size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
  try {
    return ctx_.mk_app(*s, std::move(args));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    fail(e, err.what());
  }
}

Formula Reader::equality(const SExpr& a, const SExpr& b) {
  TermId ta = term(a), tb = term(b);
  SortId sa = ctx_.sort_of(ta), sb = ctx_.sort_of(tb);
  auto kind = [&](TermId t) { return ctx_.term(t).kind; };
  bool euf_a = kind(ta) == TermKind::Var || kind(ta) == TermKind::App;
  bool euf_b = kind(tb) == TermKind::Var || kind(tb) == TermKind::App;
  if (ctx_.is_arith_sort(sa) && ctx_.is_arith_sort(sb)) {
    if (euf_a && euf_b) return f_teq(ctx_, ta, tb);
    return f_eq(ctx_, ctx_.lin_of(ta) - ctx_.lin_of(tb));
  }
  if (sa != sb) fail(a, "sort mismatch in '='");
  return f_teq(ctx_, ta, tb);
}

Formula Reader::relation(const SExpr& e) {
  const std::string& op = e.items[0].text;
  size_t n = e.items.size();
  if (n < 3) fail(e, "'" + op + "' needs two arguments");
  std::vector<Formula> parts;
  for (size_t i = 1; i + 1 < n; ++i) {
    LinTerm a = arith(e.items[i]), b = arith(e.items[i + 1]);
    if (op == "<=") parts.push_back(f_leq(ctx_, b - a));
    else if (op == "<") parts.push_back(f_lt(ctx_, b - a));
    else if (op == ">=") parts.push_back(f_leq(ctx_, a - b));
    else parts.push_back(f_lt(ctx_, a - b));
  }
  return f_and(std::move(parts));
}

Formula Reader::formula(const SExpr& e) {
  if (!e.is_list) {
    if (e.text == "true") return f_true();
    if (e.text == "false") return f_false();
    auto s = ctx_.find_symbol(e.text);
    if (!s) fail(e, "undeclared symbol '" + e.text + "'");
    if (ctx_.symbol(*s).ret != kBoolSort || !ctx_.symbol(*s).args.empty())
      fail(e, "'" + e.text + "' is not a Boolean");
    return f_atom(ctx_.mk_bool_atom(*s));
  }
  if (e.items.empty() || e.items[0].is_list) fail(e, "bad formula");
  const std::string& op = e.items[0].text;
  size_t n = e.items.size();
  std::vector<Formula> kids;
  if (op == "not") {
    if (n != 2) fail(e, "'not' takes one argument");
    return f_not(formula(e.items[1]));
  }
  if (op == "and" || op == "or") {
    for (size_t i = 1; i < n; ++i) kids.push_back(formula(e.items[i]));
    return op == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
  }
  if (op == "=>") {
    if (n < 3) fail(e, "'=>' needs two arguments");
    Formula r = formula(e.items[n - 1]);
    for (size_t i = n - 1; i-- > 1;) r = f_implies(formula(e.items[i]), r);
    return r;
  }
  if (op == "<=" || op == "<" || op == ">=" || op == ">") return relation(e);
  if (op == "=" || op == "distinct") {
    if (n < 3) fail(e, "'" + op + "' needs two arguments");
    bool boolean = false;
    if (!e.items[1].is_list) {
      auto s = ctx_.find_symbol(e.items[1].text);
      boolean = e.items[1].is("true") || e.items[1].is("false") ||
                (s && ctx_.symbol(*s).ret == kBoolSort && ctx_.symbol(*s).args.empty());
    } else {
      const auto& h = e.items[1].items.empty() ? e.items[1] : e.items[1].items[0];
      static const char* conn[] = {"not", "and", "or", "=>", "<=", "<", ">=", ">", "distinct"};
      for (auto* c : conn) boolean = boolean || h.is(c);
    }
    if (op == "=") {
      for (size_t i = 1; i + 1 < n; ++i)
        kids.push_back(boolean ? f_iff(formula(e.items[i]), formula(e.items[i + 1]))
                               : equality(e.items[i], e.items[i + 1]));
      return f_and(std::move(kids));
    }
    for (size_t i = 1; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        kids.push_back(f_not(boolean ? f_iff(formula(e.items[i]), formula(e.items[j]))
                                     : equality(e.items[i], e.items[j])));
    return f_and(std::move(kids));
  }
  fail(e, "unknown connective '" + op + "'");
}

}  // namespace smtitp
