#include "smtitp/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "smtitp/cnf.hpp"
#include "smtitp/dl.hpp"
#include "smtitp/dtc.hpp"
#include "smtitp/euf.hpp"
#include "smtitp/reader.hpp"
#include "smtitp/theories.hpp"
#include "smtitp/utvpi.hpp"

namespace smtitp {

std::optional<Logic> parse_logic(const std::string& tag) {
  std::string t;
  for (char c : tag) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  static const std::map<std::string, Logic> names = {
      {"auto", Logic::Auto},       {"lra", Logic::LRA},         {"qf_lra", Logic::LRA},  {"rdl", Logic::RDL},
      {"qf_rdl", Logic::RDL},      {"idl", Logic::IDL},         {"qf_idl", Logic::IDL},  {"utvpi-q", Logic::UTVPI_Q},
      {"utvpi-z", Logic::UTVPI_Z}, {"euf", Logic::EUF},         {"qf_uf", Logic::EUF},   {"euf+lra", Logic::EUF_LRA},
      {"qf_uflra", Logic::EUF_LRA}};
  auto it = names.find(t);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

const char* logic_name(Logic l) {
  switch (l) {
    case Logic::Auto: return "auto";
    case Logic::LRA: return "LRA";
    case Logic::RDL: return "RDL";
    case Logic::IDL: return "IDL";
    case Logic::UTVPI_Q: return "UTVPI-Q";
    case Logic::UTVPI_Z: return "UTVPI-Z";
    case Logic::EUF: return "EUF";
    case Logic::EUF_LRA: return "EUF+LRA";
  }
  return "?";
}

Problem parse_problem(const std::string& text) {
  Problem p;
  Reader rd(*p.ctx);
  enum class Mode { None, Pair, Seq, Plain } mode = Mode::None;
  std::vector<std::vector<Formula>> groups;
  auto set_mode = [&](const SExpr& e, Mode m) {
    if (mode != Mode::None && mode != m)
      throw ParseError(e.line, e.col, "assert-A/assert-B, assert-part and assert cannot be mixed");
    mode = m;
  };
  auto add = [&](size_t idx, const SExpr& e) {
    if (groups.size() <= idx) groups.resize(idx + 1);
    groups[idx].push_back(rd.formula(e));
  };
  for (const SExpr& e : parse_sexprs(text)) {
    if (rd.declaration(e)) continue;
    if (e.head("set-logic")) {
      if (e.items.size() != 2 || e.items[1].is_list) throw ParseError(e.line, e.col, "malformed set-logic");
      auto l = parse_logic(e.items[1].text);
      if (!l) throw ParseError(e.line, e.col, "unknown logic '" + e.items[1].text + "'");
      p.logic = *l;
    } else if (e.head("assert-A") || e.head("assert-B")) {
      if (e.items.size() != 2) throw ParseError(e.line, e.col, "assert-A/assert-B take one formula");
      set_mode(e, Mode::Pair);
      add(e.head("assert-A") ? 0 : 1, e.items[1]);
    } else if (e.head("assert-part")) {
      if (e.items.size() != 3 || e.items[1].is_list) throw ParseError(e.line, e.col, "malformed assert-part");
      int k = 0;
      try {
        k = std::stoi(e.items[1].text);
      } catch (const std::exception&) {
        throw ParseError(e.line, e.col, "part index must be a number");
      }
      if (k < 1 || k > 64) throw ParseError(e.line, e.col, "part index out of range");
      set_mode(e, Mode::Seq);
      add(static_cast<size_t>(k - 1), e.items[2]);
    } else if (e.head("assert")) {
      if (e.items.size() != 2) throw ParseError(e.line, e.col, "assert takes one formula");
      set_mode(e, Mode::Plain);
      add(0, e.items[1]);
    } else if (e.head("check-sat") || e.head("exit") || e.head("set-info") || e.head("set-option") ||
               e.head("get-interpolant")) {
      continue;
    } else {
      throw ParseError(e.line, e.col, "unknown command " + e.str());
    }
  }
  if (mode == Mode::None) throw Error("no assertions");
  if (mode == Mode::Pair) groups.resize(2);
  for (size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) {
      if (mode == Mode::Pair) throw Error(std::string("empty ") + (i == 0 ? "A" : "B") + " section");
      throw Error("part " + std::to_string(i + 1) + " has no assertions");
    }
    p.parts.push_back(f_and(groups[i]));
  }
  if (mode == Mode::Seq && p.parts.size() < 2) throw Error("sequence mode needs at least two parts");
  p.interpolation = mode != Mode::Plain;
  return p;
}

Problem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

namespace {

bool teq_is_arith(const Context& ctx, const AtomNode& n) {
  auto arith_var = [&](TermId t) {
    return ctx.term(t).kind != TermKind::App && ctx.is_arith_sort(ctx.sort_of(t));
  };
  return arith_var(n.lhs) && arith_var(n.rhs);
}

bool has_app(const Context& ctx, const LinTerm& t) {
  for (auto& [m, q] : t.mons)
    if (ctx.term(m).kind == TermKind::App) return true;
  return false;
}

struct Fragment {
  bool euf = false, arith = false;
  int shape = 0;  // 0 difference, 1 unit two-variable, 2 general
  bool ints = false, reals = false;
};

Fragment fragment(const Context& ctx, const std::vector<Formula>& parts) {
  Fragment fr;
  std::vector<AtomId> atoms;
  for (auto& f : parts) collect_atoms(f, atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  for (AtomId a : atoms) {
    const AtomNode& n = ctx.atom(a);
    if (n.kind == AtomKind::Bool) continue;
    if (n.kind == AtomKind::TEq && !teq_is_arith(ctx, n)) {
      fr.euf = true;
      if (ctx.is_arith_sort(ctx.sort_of(n.lhs))) fr.arith = true;
      continue;
    }
    fr.arith = true;
    if (n.kind != AtomKind::TEq && has_app(ctx, n.lin)) {
      fr.euf = true;
      continue;
    }
    for (const LaLeaf& leaf : ineq_leaves(ctx, Lit::make(a))) {
      auto uc = unit_constraint(leaf);
      if (!uc) fr.shape = 2;
      else if (!is_dl_shape(*uc)) fr.shape = std::max(fr.shape, 1);
    }
    for (SymId s : ctx.atom_symbols(a)) {
      const Symbol& sym = ctx.symbol(s);
      if (!sym.args.empty()) continue;
      if (sym.ret == kIntSort) fr.ints = true;
      if (sym.ret == kRealSort) fr.reals = true;
    }
  }
  return fr;
}

bool dl_like(Logic l) {
  return l == Logic::RDL || l == Logic::IDL || l == Logic::UTVPI_Q || l == Logic::UTVPI_Z;
}

bool integer_logic(Logic l) { return l == Logic::IDL || l == Logic::UTVPI_Z; }

// equalities become pairs of inequalities for the graph-based solvers
Formula split_equalities(Context& ctx, const Formula& f) {
  return map_atoms(f, [&](AtomId a) {
    const AtomNode& n = ctx.atom(a);
    LinTerm t;
    if (n.kind == AtomKind::Eq) t = n.lin;
    else if (n.kind == AtomKind::TEq && teq_is_arith(ctx, n)) t = ctx.lin_of(n.lhs) - ctx.lin_of(n.rhs);
    else return f_atom(a);
    return f_and(f_leq(ctx, t), f_leq(ctx, -t));
  });
}

void check_fits(const Context& ctx, const std::vector<Formula>& parts, Logic l) {
  Fragment fr = fragment(ctx, parts);
  std::string name = logic_name(l);
  if (l == Logic::EUF) {
    if (fr.arith) throw Error("arithmetic atoms are outside logic EUF");
    return;
  }
  if (fr.euf && l != Logic::EUF_LRA) throw Error("uninterpreted functions are outside logic " + name);
  if (integer_logic(l)) {
    if (fr.reals) throw Error("logic " + name + " expects Int variables");
  } else if (fr.ints) {
    throw Error("logic " + name + " expects Real variables");
  }
  int limit = (l == Logic::RDL || l == Logic::IDL) ? 0 : (l == Logic::UTVPI_Q || l == Logic::UTVPI_Z) ? 1 : 2;
  if (fr.shape > limit) throw Error("atoms outside logic " + name);
}

struct SingleRun {
  SatStatus status = SatStatus::Sat;
  Proof proof;
  Partition partition{1};
  std::map<TermId, Rational> model;
};

SingleRun solve_single(Context& ctx, const std::vector<Formula>& parts, Logic logic, const SatConfig& cfg) {
  SingleRun run;
  run.partition = Partition(static_cast<int>(parts.size()));
  LaHook la(ctx);
  DlHook dl(ctx, logic == Logic::IDL);
  UtvpiHook ut(ctx, logic == Logic::UTVPI_Z);
  EufHook euf(ctx);
  Cdcl sat(ctx, run.proof, cfg);
  std::function<void(AtomId)> own;
  switch (logic) {
    case Logic::LRA:
      sat.add_hook(&la);
      own = [&](AtomId a) { la.own(a); };
      break;
    case Logic::RDL:
    case Logic::IDL:
      sat.add_hook(&dl);
      own = [&](AtomId a) { dl.own(a); };
      break;
    case Logic::UTVPI_Q:
    case Logic::UTVPI_Z:
      sat.add_hook(&ut);
      own = [&](AtomId a) { ut.own(a); };
      break;
    case Logic::EUF:
      sat.add_hook(&euf);
      own = [&](AtomId a) { euf.own(a); };
      break;
    default: throw Error("no single-theory backend for logic " + std::string(logic_name(logic)));
  }
  CnfConverter cnf(ctx);
  for (size_t i = 0; i < parts.size(); ++i) {
    int label = static_cast<int>(i) + 1;
    Formula f = dl_like(logic) ? split_equalities(ctx, parts[i]) : parts[i];
    std::vector<Clause> cs;
    cnf.add(f, label, cs);
    for (auto& c : cs) {
      run.partition.note_clause(ctx, c, label);
      for (Lit l : c)
        if (ctx.atom(l.atom()).kind != AtomKind::Bool) own(l.atom());
      sat.add_input(c, label);
    }
  }
  run.status = sat.solve();
  if (run.status == SatStatus::Sat) {
    if (logic == Logic::LRA) run.model = la.solver().model();
    if (logic == Logic::RDL || logic == Logic::IDL) run.model = dl.solver().model();
    if (logic == Logic::UTVPI_Q || logic == Logic::UTVPI_Z) run.model = ut.solver().model();
  }
  return run;
}

Logic validator_backend(Logic l) {
  switch (l) {
    case Logic::RDL:
    case Logic::UTVPI_Q: return Logic::LRA;
    case Logic::IDL: return Logic::UTVPI_Z;
    default: return l;
  }
}

// user variables only; purification names carry a part label
void add_model(const Context& ctx, const std::map<TermId, Rational>& m, Verdict& v) {
  for (auto& [t, q] : m) {
    const TermNode& n = ctx.term(t);
    if (n.kind == TermKind::Var && ctx.symbol(n.sym).label == 0) v.model.emplace_back(ctx.term_str(t), q);
  }
}

}  // namespace

Logic detect_logic(const Context& ctx, const std::vector<Formula>& parts) {
  Fragment fr = fragment(ctx, parts);
  if (fr.euf) return fr.arith ? Logic::EUF_LRA : Logic::EUF;
  if (fr.ints && fr.reals) throw Error("mixed Int and Real variables are not supported");
  if (fr.ints) {
    if (fr.shape == 0) return Logic::IDL;
    if (fr.shape == 1) return Logic::UTVPI_Z;
    throw Error("integer constraints beyond two unit-coefficient variables are not supported");
  }
  if (fr.shape == 0) return Logic::RDL;
  if (fr.shape == 1) return Logic::UTVPI_Q;
  return Logic::LRA;
}

bool unsat_in_logic(Context& ctx, const Formula& f, Logic logic, uint64_t budget) {
  SatConfig cfg;
  cfg.budget = budget;
  SatStatus st;
  if (logic == Logic::EUF_LRA) {
    st = run_dtc(ctx, {f}, cfg).status;
  } else {
    st = solve_single(ctx, {f}, logic, cfg).status;
  }
  if (st == SatStatus::Budget) throw Error("budget exhausted during a check");
  return st == SatStatus::Unsat;
}

Validation validate(const Context& ctx, const Formula& a, const Formula& b, const Formula& itp, Logic logic) {
  Validation v;
  Context c = ctx;
  Logic be = validator_backend(logic);
  v.entailed = unsat_in_logic(c, f_and(a, f_not(itp)), be);
  v.refutes = unsat_in_logic(c, f_and(itp, b), be);
  auto sa = formula_symbols(c, a), sb = formula_symbols(c, b);
  v.symbols = true;
  for (SymId s : formula_symbols(c, itp)) {
    bool in_a = std::binary_search(sa.begin(), sa.end(), s), in_b = std::binary_search(sb.begin(), sb.end(), s);
    if (!in_a || !in_b) {
      v.symbols = false;
      if (v.reason.empty()) v.reason = "symbol " + c.symbol(s).name + " is not shared (condition iii)";
    }
  }
  if (!v.refutes) v.reason = "I & B is satisfiable (condition ii)";
  if (!v.entailed) v.reason = "A does not entail I (condition i)";
  return v;
}

Verdict run(Problem& p, const Options& opt) {
  Context& ctx = *p.ctx;
  Verdict v;
  v.logic = opt.theory != Logic::Auto ? opt.theory : p.logic != Logic::Auto ? p.logic : detect_logic(ctx, p.parts);
  check_fits(ctx, p.parts, v.logic);
  SatConfig cfg;
  cfg.seed = opt.seed;
  cfg.budget = opt.budget;
  LaItpOptions lo;
  lo.strengthen = opt.stronger;
  LemmaItp itp = lemma_interpolator(ctx, lo);
  int nparts = static_cast<int>(p.parts.size());

  if (v.logic == Logic::EUF_LRA) {
    DtcRun run = run_dtc(ctx, p.parts, cfg);
    v.status = run.status;
    add_model(ctx, run.model, v);
    if (run.status == SatStatus::Unsat) {
      v.proof = run.proof;
      if (p.interpolation) v.interpolants = interpolate_combined(ctx, run, itp);
    }
  } else {
    SingleRun run = solve_single(ctx, p.parts, v.logic, cfg);
    v.status = run.status;
    add_model(ctx, run.model, v);
    if (run.status == SatStatus::Unsat) {
      v.proof = std::move(run.proof);
      if (p.interpolation) v.interpolants = sequence_interpolants(ctx, v.proof, run.partition, itp);
    }
  }
  std::sort(v.model.begin(), v.model.end(), [](auto& x, auto& y) { return x.first < y.first; });
  if (v.status != SatStatus::Unsat) return v;

  v.proof_check = check_proof(v.proof, lemma_checker(ctx));
  if (!opt.dump_proof.empty()) {
    std::ofstream out(opt.dump_proof);
    if (!out) throw Error("cannot write " + opt.dump_proof);
    out << dump_proof(ctx, v.proof, nparts);
  }
  if (opt.validate && p.interpolation) {
    for (int k = 1; k < nparts; ++k) {
      std::vector<Formula> a(p.parts.begin(), p.parts.begin() + k), b(p.parts.begin() + k, p.parts.end());
      v.validations.push_back(validate(ctx, f_and(a), f_and(b), v.interpolants[k - 1], v.logic));
    }
    Context c = ctx;
    for (int k = 1; k + 1 < nparts; ++k) {
      Formula step = f_and({v.interpolants[k - 1], p.parts[k], f_not(v.interpolants[k])});
      if (!unsat_in_logic(c, step, validator_backend(v.logic))) v.chain_ok = false;
    }
  }
  return v;
}

std::string format_verdict(const Context& ctx, const Verdict& v) {
  std::string out;
  if (v.status == SatStatus::Budget) return "unknown\n";
  if (v.status == SatStatus::Sat) {
    out = "sat\n";
    if (!v.model.empty()) {
      out += "(model";
      for (auto& [name, q] : v.model) out += " (" + name + " " + to_string(q) + ")";
      out += ")\n";
    }
    return out;
  }
  out = "unsat\n";
  for (size_t k = 0; k < v.interpolants.size(); ++k)
    out += "(interpolant " + std::to_string(k + 1) + " " + to_string(ctx, v.interpolants[k]) + ")\n";
  return out;
}

}  // namespace smtitp
