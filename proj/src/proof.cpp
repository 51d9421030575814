#include "smtitp/proof.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "smtitp/reader.hpp"

namespace smtitp {

Clause resolve(const Clause& neg_side, const Clause& pos_side, AtomId pivot) {
  Clause out;
  Lit p = Lit::make(pivot), np = Lit::make(pivot, true);
  for (Lit l : neg_side)
    if (l != np) out.push_back(l);
  for (Lit l : pos_side)
    if (l != p) out.push_back(l);
  normalize_clause(out);
  return out;
}

int Proof::push_node(ProofNode n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

int Proof::add_input(Clause c, int part) {
  normalize_clause(c);
  ProofNode n;
  n.kind = NodeKind::Input;
  n.clause = std::move(c);
  n.part = part;
  return push_node(std::move(n));
}

int Proof::add_lemma(Clause c, const std::string& theory) {
  normalize_clause(c);
  auto key = std::make_pair(c, theory);
  auto it = lemma_memo_.find(key);
  if (it != lemma_memo_.end()) return it->second;
  ProofNode n;
  n.kind = NodeKind::Lemma;
  n.clause = std::move(c);
  n.theory = theory;
  int id = push_node(std::move(n));
  lemma_memo_[key] = id;
  return id;
}

int Proof::add_res(int a, int b, AtomId pivot) {
  Lit np = Lit::make(pivot, true);
  int left = a, right = b;
  if (!clause_has(nodes_[a].clause, np)) std::swap(left, right);
  if (!clause_has(nodes_[left].clause, np) || !clause_has(nodes_[right].clause, Lit::make(pivot)))
    throw Error("resolution premises do not clash on the pivot");
  auto key = std::make_tuple(pivot, left, right);
  auto it = res_memo_.find(key);
  if (it != res_memo_.end()) return it->second;
  ProofNode n;
  n.kind = NodeKind::Res;
  n.pivot = pivot;
  n.left = left;
  n.right = right;
  n.clause = resolve(nodes_[left].clause, nodes_[right].clause, pivot);
  int id = push_node(std::move(n));
  res_memo_[key] = id;
  return id;
}

std::vector<int> Proof::reachable(int from) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{from}, out;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    if (nodes_[n].kind == NodeKind::Res) {
      stack.push_back(nodes_[n].left);
      stack.push_back(nodes_[n].right);
    }
  }
  for (size_t i = 0; i < nodes_.size(); ++i)
    if (seen[i]) out.push_back(static_cast<int>(i));
  return out;
}

ProofCheck check_proof(const Proof& p, const LemmaChecker& lemma_ok, bool need_empty_root) {
  ProofCheck r;
  auto bad = [&](int n, const std::string& msg) {
    r.ok = false;
    r.node = n;
    r.message = msg;
    return r;
  };
  if (p.root() < 0 || p.root() >= static_cast<int>(p.size())) return bad(-1, "no root");
  for (int i : p.reachable(p.root())) {
    const ProofNode& n = p.node(i);
    Clause c = n.clause;
    normalize_clause(c);
    if (c != n.clause) return bad(i, "clause not sorted or has duplicate literals");
    switch (n.kind) {
      case NodeKind::Input: break;
      case NodeKind::Lemma:
        if (lemma_ok && !lemma_ok(n.theory, n.clause)) return bad(i, "theory lemma is not valid");
        break;
      case NodeKind::Res: {
        if (n.left < 0 || n.right < 0 || n.left >= i || n.right >= i) return bad(i, "premise ids out of order");
        const Clause& l = p.node(n.left).clause;
        const Clause& rr = p.node(n.right).clause;
        if (!clause_has(l, Lit::make(n.pivot, true))) return bad(i, "left premise lacks the negative pivot");
        if (!clause_has(rr, Lit::make(n.pivot))) return bad(i, "right premise lacks the positive pivot");
        if (resolve(l, rr, n.pivot) != n.clause) return bad(i, "resolvent does not match premises");
        break;
      }
    }
  }
  if (need_empty_root && !p.node(p.root()).clause.empty()) return bad(p.root(), "root is not the empty clause");
  return r;
}

std::string dump_proof(const Context& ctx, const Proof& p, int nparts) {
  std::vector<int> nodes = p.reachable(p.root());
  std::map<int, int> node_id;
  std::map<AtomId, int> atom_id;
  std::set<SymId> syms;
  std::vector<AtomId> atoms;
  for (int n : nodes) {
    node_id[n] = static_cast<int>(node_id.size());
    for (Lit l : p.node(n).clause)
      if (!atom_id.count(l.atom())) {
        atom_id[l.atom()] = static_cast<int>(atom_id.size()) + 1;
        atoms.push_back(l.atom());
      }
    if (p.node(n).kind == NodeKind::Res && !atom_id.count(p.node(n).pivot)) {
      atom_id[p.node(n).pivot] = static_cast<int>(atom_id.size()) + 1;
      atoms.push_back(p.node(n).pivot);
    }
  }
  for (AtomId a : atoms)
    for (SymId s : ctx.atom_symbols(a)) syms.insert(s);
  std::ostringstream out;
  out << "(proof\n";
  std::set<SortId> sorts;
  for (SymId s : syms) {
    const Symbol& sym = ctx.symbol(s);
    for (SortId a : sym.args) sorts.insert(a);
    sorts.insert(sym.ret);
  }
  for (SortId s : sorts)
    if (s > kIntSort) out << " (declare-sort " << ctx.sort_name(s) << ")\n";
  for (SymId s : syms) {
    const Symbol& sym = ctx.symbol(s);
    if (sym.args.empty()) {
      out << " (declare-var " << sym.name << " " << ctx.sort_name(sym.ret) << ")\n";
    } else {
      out << " (declare-fun " << sym.name << " (";
      for (size_t i = 0; i < sym.args.size(); ++i) out << (i ? " " : "") << ctx.sort_name(sym.args[i]);
      out << ") " << ctx.sort_name(sym.ret) << ")\n";
    }
  }
  out << " (atoms";
  for (AtomId a : atoms) out << "\n  (" << atom_id[a] << " " << ctx.atom_str(a) << ")";
  out << ")\n";
  auto clause = [&](const Clause& c) {
    std::string s = "(";
    for (size_t i = 0; i < c.size(); ++i)
      s += (i ? " " : "") + std::string(c[i].neg() ? "-" : "") + std::to_string(atom_id[c[i].atom()]);
    return s + ")";
  };
  for (int n : nodes) {
    const ProofNode& pn = p.node(n);
    switch (pn.kind) {
      case NodeKind::Input: {
        std::string side = nparts == 2 ? (pn.part == 1 ? "A" : "B") : std::to_string(pn.part);
        out << " (input " << side << " " << clause(pn.clause) << ")\n";
        break;
      }
      case NodeKind::Lemma: out << " (tlemma " << pn.theory << " " << clause(pn.clause) << ")\n"; break;
      case NodeKind::Res:
        out << " (res " << atom_id[pn.pivot] << " " << node_id[pn.left] << " " << node_id[pn.right] << ")\n";
        break;
    }
  }
  out << ")\n";
  return out.str();
}

Proof load_proof(Context& ctx, const std::string& text, int* nparts) {
  auto top = parse_sexprs(text);
  if (top.size() != 1 || !top[0].head("proof")) throw Error("expected a single (proof ...) form");
  Reader reader(ctx);
  Proof p;
  std::map<long, AtomId> atoms;
  int max_part = 2;
  auto number = [](const SExpr& e) -> long {
    if (e.is_list) throw ParseError(e.line, e.col, "expected an integer");
    try {
      size_t pos = 0;
      long v = std::stol(e.text, &pos);
      if (pos != e.text.size()) throw Error("");
      return v;
    } catch (...) {
      throw ParseError(e.line, e.col, "expected an integer, got '" + e.text + "'");
    }
  };
  auto clause = [&](const SExpr& e) {
    if (!e.is_list) throw ParseError(e.line, e.col, "expected a clause");
    Clause c;
    for (auto& l : e.items) {
      long v = number(l);
      auto it = atoms.find(v < 0 ? -v : v);
      if (v == 0 || it == atoms.end()) throw ParseError(l.line, l.col, "unknown atom id");
      c.push_back(Lit::make(it->second, v < 0));
    }
    return c;
  };
  for (size_t i = 1; i < top[0].items.size(); ++i) {
    const SExpr& e = top[0].items[i];
    if (e.head("declare-var") || e.head("declare-fun") || e.head("declare-sort")) {
      if (e.items.size() > 1 && !e.items[1].is_list &&
          (ctx.find_symbol(e.items[1].text) || ctx.find_sort(e.items[1].text)))
        continue;
      reader.declaration(e);
    } else if (e.head("atoms")) {
      for (size_t j = 1; j < e.items.size(); ++j) {
        const SExpr& a = e.items[j];
        if (!a.is_list || a.items.size() != 2) throw ParseError(a.line, a.col, "malformed atom entry");
        Formula f = reader.formula(a.items[1]);
        if (f->kind != FKind::Atom) throw ParseError(a.line, a.col, "entry is not an atom");
        atoms[number(a.items[0])] = f->atom;
      }
    } else if (e.head("input")) {
      if (e.items.size() != 3) throw ParseError(e.line, e.col, "malformed input leaf");
      const SExpr& s = e.items[1];
      int part = s.is("A") ? 1 : s.is("B") ? 2 : static_cast<int>(number(s));
      max_part = std::max(max_part, part);
      p.add_input(clause(e.items[2]), part);
    } else if (e.head("tlemma")) {
      if (e.items.size() != 3 || e.items[1].is_list) throw ParseError(e.line, e.col, "malformed lemma leaf");
      ProofNode n;
      n.kind = NodeKind::Lemma;
      n.theory = e.items[1].text;
      n.clause = clause(e.items[2]);
      normalize_clause(n.clause);
      p.push_node(std::move(n));
    } else if (e.head("res")) {
      if (e.items.size() != 4) throw ParseError(e.line, e.col, "malformed resolution node");
      long piv = number(e.items[1]), l = number(e.items[2]), r = number(e.items[3]);
      if (!atoms.count(piv)) throw ParseError(e.line, e.col, "unknown pivot atom");
      if (l < 0 || r < 0 || l >= static_cast<long>(p.size()) || r >= static_cast<long>(p.size()))
        throw ParseError(e.line, e.col, "premise id out of range");
      ProofNode n;
      n.kind = NodeKind::Res;
      n.pivot = atoms[piv];
      n.left = static_cast<int>(l);
      n.right = static_cast<int>(r);
      n.clause = resolve(p.node(n.left).clause, p.node(n.right).clause, n.pivot);
      p.push_node(std::move(n));
    } else {
      throw ParseError(e.line, e.col, "unknown proof entry");
    }
  }
  if (p.size() == 0) throw Error("empty proof");
  p.set_root(static_cast<int>(p.size()) - 1);
  if (nparts) *nparts = max_part;
  return p;
}

std::string proof_dot(const Context& ctx, const Proof& p) {
  std::ostringstream out;
  out << "digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (int n : p.reachable(p.root())) {
    const ProofNode& pn = p.node(n);
    std::string label;
    for (Lit l : pn.clause) label += (label.empty() ? "" : " | ") + ctx.lit_str(l);
    if (label.empty()) label = "false";
    std::string esc;
    for (char ch : label) {
      if (ch == '"' || ch == '\\') esc += '\\';
      esc += ch;
    }
    const char* style = pn.kind == NodeKind::Lemma ? ", style=bold" : pn.kind == NodeKind::Input ? ", style=dashed" : "";
    out << "  n" << n << " [label=\"" << esc << "\"" << style << "];\n";
    if (pn.kind == NodeKind::Res) {
      out << "  n" << pn.left << " -> n" << n << ";\n";
      out << "  n" << pn.right << " -> n" << n << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

Formula ProofInterpolator::leaf(int node, int k) {
  const ProofNode& n = proof_.node(node);
  if (n.kind == NodeKind::Input) {
    if (n.part > k) return f_true();
    return f_clause(part_.project_B(ctx_, n.clause, k));
  }
  std::vector<Lit> eta;
  std::vector<Side> sides;
  for (Lit l : n.clause) {
    Side s = part_.atom_side(ctx_, l.atom(), k);
    if (s == Side::Mixed) throw Error("AB-mixed atom in theory lemma: " + ctx_.atom_str(l.atom()));
    eta.push_back(~l);
    sides.push_back(s);
  }
  if (!lemma_itp_) throw Error("no interpolator for theory " + n.theory);
  return lemma_itp_(n.theory, eta, sides);
}

Formula ProofInterpolator::interpolant(int k) {
  if (proof_.root() < 0 || !proof_.node(proof_.root()).clause.empty())
    throw Error("interpolation needs a refutation with the empty clause at its root");
  std::vector<std::pair<int, bool>> stack{{proof_.root(), false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (memo_.count({n, k})) continue;
    const ProofNode& pn = proof_.node(n);
    if (pn.kind != NodeKind::Res) {
      memo_[{n, k}] = leaf(n, k);
      continue;
    }
    if (!expanded) {
      stack.push_back({n, true});
      stack.push_back({pn.left, false});
      stack.push_back({pn.right, false});
      continue;
    }
    const Formula& il = memo_.at({pn.left, k});
    const Formula& ir = memo_.at({pn.right, k});
    Side s = part_.atom_side(ctx_, pn.pivot, k);
    if (s == Side::Mixed) throw Error("AB-mixed pivot: " + ctx_.atom_str(pn.pivot));
    memo_[{n, k}] = s == Side::B ? f_and(ir, il) : f_or(ir, il);
  }
  return memo_.at({proof_.root(), k});
}

std::vector<Formula> ProofInterpolator::sequence() {
  std::vector<Formula> out;
  for (int k = 1; k < part_.num_parts(); ++k) out.push_back(interpolant(k));
  return out;
}

Formula interpolate(Context& ctx, const Proof& proof, const Partition& part, const LemmaItp& lemma_itp, int k) {
  ProofInterpolator it(ctx, proof, part, lemma_itp);
  return it.interpolant(k);
}

std::vector<Formula> sequence_interpolants(Context& ctx, const Proof& proof, const Partition& part,
                                           const LemmaItp& lemma_itp) {
  ProofInterpolator it(ctx, proof, part, lemma_itp);
  return it.sequence();
}

}  // namespace smtitp
