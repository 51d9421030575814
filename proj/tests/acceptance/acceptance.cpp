// One line per acceptance criterion. Exit status is nonzero when any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mixed_refutation.hpp"
#include "oracles.hpp"
#include "random_comb.hpp"
#include "smtitp/dtc.hpp"
#include "smtitp/frontend.hpp"
#include "smtitp/la.hpp"
#include "smtitp/reader.hpp"
#include "smtitp/theories.hpp"

using namespace smtitp;

namespace {

// pinned tolerances
constexpr double kGoldenMaxMs = 1000.0;
constexpr double kPropertyMaxSeconds = 60.0;
constexpr int kMinCases = 100;
constexpr uint64_t kSeed = 20261016;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Report {
  int failed = 0;
  void line(const std::string& id, bool ok, const std::string& detail) {
    if (!ok) ++failed;
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
  }
};

// first failure wins; later ones are counted
struct Verdicts {
  bool ok = true;
  int failures = 0;
  std::string first;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) first = what;
    ok = false;
    ++failures;
  }
  std::string detail(const std::string& pass) const {
    return ok ? pass : first + (failures > 1 ? " (+" + std::to_string(failures - 1) + " more)" : "");
  }
};

std::string data(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

Formula parse_in(Problem& p, const std::string& text) {
  Reader rd(*p.ctx);
  return rd.formula(parse_sexprs(text).at(0));
}

std::string str(Problem& p, const Formula& f) { return to_string(*p.ctx, f); }

std::vector<std::string> conjuncts(const Context& ctx, const Formula& f) {
  std::vector<std::string> out;
  if (f->kind == FKind::And)
    for (auto& k : f->kids) out.push_back(to_string(ctx, k));
  else
    out.push_back(to_string(ctx, f));
  std::sort(out.begin(), out.end());
  return out;
}

bool same_conjuncts(Problem& p, const Formula& got, const std::string& want) {
  return conjuncts(*p.ctx, got) == conjuncts(*p.ctx, parse_in(p, want));
}

bool equivalent(Problem& p, const Formula& x, const Formula& y) {
  return unsat_in_logic(*p.ctx, f_not(f_iff(x, y)), Logic::LRA);
}

bool entails(Problem& p, const Formula& x, const Formula& y) {
  return unsat_in_logic(*p.ctx, f_and(x, f_not(y)), Logic::LRA);
}

struct Solved {
  Problem p;
  Verdict v;
  double ms = 0;
};

Solved solve_file(const std::string& file, Logic theory = Logic::Auto, bool stronger = false) {
  Solved s;
  auto t0 = Clock::now();
  s.p = parse_problem_file(data(file));
  Options opt;
  opt.theory = theory;
  opt.stronger = stronger;
  opt.validate = true;
  s.v = run(s.p, opt);
  s.ms = ms_since(t0);
  return s;
}

Solved solve_text(const std::string& text, Logic theory = Logic::Auto) {
  Solved s;
  s.p = parse_problem(text);
  Options opt;
  opt.theory = theory;
  opt.validate = true;
  s.v = run(s.p, opt);
  return s;
}

// a verdict whose proof, interpolants and validations are all sound
void expect_clean_unsat(Verdicts& c, const Solved& s, const std::string& tag) {
  c.expect(s.v.status == SatStatus::Unsat, tag + ": not unsat");
  if (s.v.status != SatStatus::Unsat) return;
  c.expect(s.v.proof_check.ok, tag + ": proof check: " + s.v.proof_check.message);
  for (auto& r : s.v.validations) c.expect(r.ok(), tag + ": validator: " + r.reason);
  c.expect(s.v.chain_ok, tag + ": chain condition");
  c.expect(s.ms <= kGoldenMaxMs, tag + ": slower than " + std::to_string(static_cast<int>(kGoldenMaxMs)) + " ms");
}

// proofs gathered from every golden run for the hygiene line
struct Hygiene {
  int proofs = 0, lemmas = 0;
  Verdicts v;
  void add(const Context& ctx, const Proof& p, const std::string& tag) {
    ++proofs;
    for (int n : p.reachable(p.root()))
      if (p.node(n).kind == NodeKind::Lemma) ++lemmas;
    ProofCheck r = check_proof(p, lemma_checker(ctx));
    v.expect(r.ok, tag + ": node " + std::to_string(r.node) + ": " + r.message);
  }
  void add(const Solved& s, const std::string& tag) {
    if (s.v.status == SatStatus::Unsat) add(*s.p.ctx, s.v.proof, tag);
  }
};

// ---------------------------------------------------------------- golden

void golden_mixed(Report& rep, Hygiene& hy) {
  Verdicts c;
  Solved s = solve_file("bool_lra_mixed.smt");
  expect_clean_unsat(c, s, "solver");
  hy.add(s, "mixed");
  if (s.v.status == SatStatus::Unsat)
    c.expect(equivalent(s.p, s.v.interpolants[0], parse_in(s.p, "(and (or p (<= 0 (+ (* 4 x1) 1))) (not q))")),
             "solver interpolant not equivalent: " + str(s.p, s.v.interpolants[0]));
  Context ctx;
  Proof fig = load_proof(ctx, testing_support::kMixedRefutation);
  hy.add(ctx, fig, "mixed-hand");
  Partition part = testing_support::partition_of(ctx, fig, 2);
  std::string got = to_string(ctx, interpolate(ctx, fig, part, testing_support::mixed_lemma_itp(ctx)));
  c.expect(got == "(and (or p (<= 0 (+ (* 4 x1) 1))) (not q))", "hand proof gave " + got);
  rep.line("golden/bool-lra-mixed", c.ok, c.detail("I equivalent; hand proof reproduces " + got));
}

void golden_lra(Report& rep, Hygiene& hy) {
  Verdicts c;
  Solved s = solve_file("lra_pair.smt", Logic::LRA);
  expect_clean_unsat(c, s, "solver");
  hy.add(s, "lra");
  std::string got = s.v.interpolants.empty() ? "-" : str(s.p, s.v.interpolants[0]);
  // the solver follows the tableau route, giving the second form
  c.expect(got == "(<= 0 (+ (* 4/3 x1) 1/3))", "simplex-route interpolant " + got);
  Formula i1 = parse_in(s.p, "(<= 0 (+ (* 4 x1) 1))"), i2 = parse_in(s.p, "(<= 0 (+ (* 4/3 x1) 1/3))");
  c.expect(equivalent(s.p, i1, i2), "forms not equivalent");
  // hand proof of the first form
  LaProof hp;
  auto leaf = [&](const char* t) {
    Formula f = parse_in(s.p, t);
    return hp.add_leaf(*la_leaf(*s.p.ctx, Lit::make(f->atom)));
  };
  int a1 = leaf("(<= 0 (+ x1 (* -3 x2) 1))"), a2 = leaf("(<= 0 (+ x1 x2))");
  int b1 = leaf("(<= 0 (+ x3 (* -2 x1) -3))"), b2 = leaf("(<= 0 (- 1 (* 2 x3)))");
  hp.set_root(hp.add_comb(hp.add_comb(a1, a2, 1, 3), hp.add_comb(b1, b2, 2, 1), 1, 1));
  Lit lb1 = hp.node(b1).hyp.lit, lb2 = hp.node(b2).hyp.lit;
  std::string hand = str(s.p, la_interpolate_proof(*s.p.ctx, hp, [&](Lit x) {
    return (x == lb1 || x == lb2) ? Side::B : Side::A;
  }));
  c.expect(hand == "(<= 0 (+ (* 4 x1) 1))", "hand proof gave " + hand);
  rep.line("golden/lra-hand-and-tableau", c.ok, c.detail(hand + " and " + got + ", equivalent"));
}

void golden_diseq(Report& rep, Hygiene& hy) {
  Verdicts c;
  Solved s = solve_file("diseq_lra.smt");
  expect_clean_unsat(c, s, "solver");
  hy.add(s, "diseq");
  std::string got = s.v.interpolants.empty() ? "-" : str(s.p, s.v.interpolants[0]);
  Formula want = parse_in(s.p, "(or (< 0 (+ (* 4 x1) 1)) (< 0 (- (* -4 x1) 1)))");
  c.expect(got == str(s.p, want) || (!s.v.interpolants.empty() && equivalent(s.p, s.v.interpolants[0], want)),
           "got " + got);
  rep.line("golden/diseq", c.ok, c.detail(got));
}

void golden_strengthen(Report& rep, Hygiene& hy) {
  Verdicts c;
  Solved strong = solve_file("strengthen_lra.smt", Logic::LRA, true);
  Solved plain = solve_file("strengthen_lra.smt", Logic::LRA, false);
  expect_clean_unsat(c, strong, "stronger");
  expect_clean_unsat(c, plain, "plain");
  hy.add(strong, "strengthen");
  hy.add(plain, "strengthen-plain");
  if (c.ok) {
    Formula is = strong.v.interpolants[0];
    Formula ip = parse_in(strong.p, to_string(*plain.p.ctx, plain.v.interpolants[0]));
    c.expect(same_conjuncts(strong.p, is, "(and (<= 0 (+ x1 (- x3) 1)) (<= 0 (+ x4 (* -3/2 x5) -1)))"),
             "strengthened " + str(strong.p, is));
    c.expect(same_conjuncts(strong.p, ip, "(<= 0 (+ x1 (- x3) (* 2 x4) (* -3 x5) -1))"), "plain " + str(strong.p, ip));
    c.expect(entails(strong.p, is, ip) && !entails(strong.p, ip, is), "not strictly stronger");
  }
  rep.line("golden/strengthening", c.ok, c.detail("strict entailment of the unstrengthened summary"));
}

void golden_rdl(Report& rep, Hygiene& hy) {
  Verdicts c;
  Solved s = solve_file("rdl_pair.smt", Logic::RDL);
  expect_clean_unsat(c, s, "rdl");
  hy.add(s, "rdl");
  if (c.ok) {
    c.expect(same_conjuncts(s.p, s.v.interpolants[0], "(and (<= 0 (+ x1 (- x3) 1)) (<= 0 (+ x4 (- x5) -1)))"),
             "DL route " + str(s.p, s.v.interpolants[0]));
    // LA interpolation of the very same DL lemmas
    Partition part = testing_support::partition_of(*s.p.ctx, s.v.proof, 2);
    Context& ctx = *s.p.ctx;
    Formula la = interpolate(ctx, s.v.proof, part, [&](const std::string&, const std::vector<Lit>& eta,
                                                        const std::vector<Side>& sides) {
      return la_interpolate(ctx, eta, sides);
    });
    c.expect(same_conjuncts(s.p, la, "(<= 0 (+ x1 (- x3) x4 (- x5)))"), "LA route " + str(s.p, la));
    c.expect(entails(s.p, s.v.interpolants[0], la) && !entails(s.p, la, s.v.interpolants[0]), "DL not stronger");
  }
  rep.line("golden/rdl-graph", c.ok, c.detail("DL interpolant exact; LA route on same proof strictly weaker"));
}

void golden_utvpi(Report& rep, Hygiene& hy) {
  Verdicts c;
  struct Case {
    const char* file;
    const char* want;
  } cases[] = {
      {"utvpi_z_b_only.smt", "(and (<= 0 (+ (- x6) (- x5))) (<= 0 (+ x3 (- x1) 2)))"},
      {"utvpi_z_shared.smt", "(and (<= 0 (+ x2 (- x4) -4)) (<= 0 (+ x3 (- x2) 6)))"},
      {"utvpi_z_tighten.smt", "(<= 0 (+ (- x2) x6 -4))"},
      {"utvpi_z_conditional.smt", "(=> (<= 0 (+ (- x6) (- x5))) (<= 0 (+ x1 (- x3) -3)))"},
  };
  int k = 0;
  for (auto& cs : cases) {
    ++k;
    Solved s = solve_file(cs.file, Logic::UTVPI_Z);
    expect_clean_unsat(c, s, cs.file);
    hy.add(s, cs.file);
    if (s.v.status != SatStatus::Unsat) continue;
    Formula got = s.v.interpolants[0];
    bool exact = k == 4 ? str(s.p, got) == str(s.p, parse_in(s.p, cs.want)) : same_conjuncts(s.p, got, cs.want);
    c.expect(exact, std::string(cs.file) + " gave " + str(s.p, got));
  }
  // stated non-interpolants
  Problem p2 = parse_problem_file(data("utvpi_z_shared.smt"));
  Validation r2 = validate(*p2.ctx, p2.parts[0], p2.parts[1], parse_in(p2, "(<= 0 (+ x3 (- x4) 2))"), p2.logic);
  c.expect(!r2.ok() && !r2.refutes && r2.entailed && r2.symbols, "shared-variable summary not rejected on condition ii");
  Problem p4 = parse_problem_file(data("utvpi_z_conditional.smt"));
  Validation r4 = validate(*p4.ctx, p4.parts[0], p4.parts[1],
                           parse_in(p4, "(and (<= 0 (+ x1 x6)) (<= 0 (+ x5 (- x3) -2)))"), p4.logic);
  c.expect(!r4.ok() && !r4.refutes, "conditional summaries not rejected on condition ii");
  rep.line("golden/utvpi-z-witnesses", c.ok, c.detail("four exact interpolants; two non-interpolants rejected (ii)"));
}

void golden_dtc(Report& rep, Hygiene& hy) {
  Verdicts c;
  auto t0 = Clock::now();
  Problem p = parse_problem_file(data("euf_lra_split.smt"));
  Context& ctx = *p.ctx;
  DtcRun run = run_dtc(ctx, p.parts);
  c.expect(run.status == SatStatus::Unsat, "not unsat");
  if (run.status == SatStatus::Unsat) {
    hy.add(ctx, run.proof, "euf-lra");
    IeAudit au = audit_ie_local(run.proof, run.catalog.ie);
    c.expect(au.ok, "ie-local audit: " + au.message);
    std::set<AtomId> ie = run.catalog.ie;
    SplitStats st;
    Proof q = split_ab_mixed(ctx, run.proof, run.partition, 1, ie, &st);
    hy.add(ctx, q, "euf-lra-split");
    std::vector<std::string> ts;
    for (auto& r : st.splits) ts.push_back(ctx.term_str(r.t));
    c.expect(ts == std::vector<std::string>{"(+ y -1)", "(f (+ y -1))"}, "split terms differ");
    auto has = [&](const Clause& cl, TermId a, TermId b) {
      AtomId e = ctx.mk_teq(a, b);
      return clause_has(cl, Lit::make(e));
    };
    if (st.splits.size() == 2) {
      for (auto& r : st.splits) {
        c.expect(has(r.c1, r.a, r.t) && has(r.c2, r.t, r.b), "split clause lacks a=t or t=b");
        c.expect(lemma_valid(ctx, r.theory, r.c1) && lemma_valid(ctx, r.theory, r.c2), "split lemma invalid");
      }
      TermId a2 = ctx.mk_var(*ctx.find_symbol("a2")), b1 = ctx.mk_var(*ctx.find_symbol("b1"));
      c.expect(st.splits[0].a == a2 || st.splits[0].b == a2, "first split is not on a2 = b2");
      c.expect(st.splits[1].a == b1 || st.splits[1].b == b1, "second split is not on a1 = b1");
    }
    c.expect(q.node(q.root()).clause.empty(), "root changed");
    c.expect(st.nodes_after <= st.nodes_before + 2 * st.splits.size(), "growth bound");
    auto itps = interpolate_combined(ctx, run, lemma_interpolator(ctx));
    Validation v = validate(ctx, p.parts[0], p.parts[1], itps.at(0), Logic::EUF_LRA);
    c.expect(v.ok(), "validator: " + v.reason);
    c.expect(ms_since(t0) <= kGoldenMaxMs, "slower than the golden limit");
    rep.line("golden/euf-lra-split", c.ok,
             c.detail("t = " + (ts.size() == 2 ? ts[0] + ", " + ts[1] : std::string("?")) + "; I = " +
                      to_string(ctx, itps[0])));
    return;
  }
  rep.line("golden/euf-lra-split", false, c.detail(""));
}

// ---------------------------------------------------------------- properties

struct Shape {
  // 0 bound or difference, 1 unit two-variable, 2 other
  static int of(const Context& ctx, AtomId a) {
    const AtomNode& n = ctx.atom(a);
    if (n.kind == AtomKind::Bool || n.kind == AtomKind::TEq) return 0;
    const auto& m = n.lin.mons;
    if (m.size() <= 1) return 0;
    if (m.size() > 2 || abs(m[0].second) != abs(m[1].second)) return 2;
    return m[0].second == -m[1].second ? 0 : 1;
  }
  static int max(const Context& ctx, const Formula& f) {
    std::vector<AtomId> atoms;
    collect_atoms(f, atoms);
    int s = 0;
    for (AtomId a : atoms) s = std::max(s, of(ctx, a));
    return s;
  }
};

struct Tally {
  int cases = 0, unsat = 0, interpolants = 0;
  Verdicts v;
  std::string counts() const {
    return std::to_string(cases) + " cases, " + std::to_string(unsat) + " unsat, " + std::to_string(interpolants) +
           " interpolants";
  }
};

void record(Tally& t, const Solved& s, const std::string& tag) {
  if (s.v.status != SatStatus::Unsat) return;
  ++t.unsat;
  t.v.expect(s.v.proof_check.ok, tag + ": proof: " + s.v.proof_check.message);
  for (auto& r : s.v.validations) {
    ++t.interpolants;
    t.v.expect(r.ok(), tag + ": validator: " + r.reason);
  }
  t.v.expect(s.v.chain_ok, tag + ": chain");
}

std::string q_str(long v) { return std::to_string(v); }

std::string decls(const char* prefix, int n, const char* sort) {
  std::string s;
  for (int i = 0; i < n; ++i) s += "(declare-var " + std::string(prefix) + std::to_string(i) + " " + sort + ")\n";
  return s;
}

// LA conjunctions against Fourier-Motzkin
void suite_la(std::mt19937_64& rng, Tally& t) {
  for (int round = 0; round < 150; ++round) {
    int nv = 2 + static_cast<int>(rng() % 4), nl = 3 + static_cast<int>(rng() % 5);
    std::vector<oracle::Row> rows;
    std::string text = "(set-logic LRA)\n" + decls("x", nv, "Real");
    bool has_a = false, has_b = false;
    for (int i = 0; i < nl; ++i) {
      oracle::Row r;
      r.a.assign(nv, 0);
      std::string sum = "(+";
      int nz = 0;
      for (int v = 0; v < nv; ++v) {
        int k = static_cast<int>(rng() % 7) - 3;
        if (rng() % 3 == 0) k = 0;
        if (k == 0) continue;
        r.a[v] = k;
        ++nz;
        sum += " (* " + q_str(k) + " x" + std::to_string(v) + ")";
      }
      if (nz == 0) {
        r.a[0] = 1;
        sum += " x0";
      }
      int c = static_cast<int>(rng() % 9) - 4;
      r.c = c;
      sum += " " + q_str(c) + ")";
      int op = static_cast<int>(rng() % 20);
      r.op = op < 12 ? oracle::Row::Leq : op < 17 ? oracle::Row::Lt : oracle::Row::Eq;
      const char* rel = r.op == oracle::Row::Leq ? "<=" : r.op == oracle::Row::Lt ? "<" : "=";
      bool in_a = i == 0 ? true : i == 1 ? false : rng() % 2;
      (in_a ? has_a : has_b) = true;
      text += std::string(in_a ? "(assert-A (" : "(assert-B (") + rel + " 0 " + sum + "))\n";
      rows.push_back(r);
    }
    Solved s = solve_text(text, Logic::LRA);
    ++t.cases;
    bool sat = oracle::fm_sat(rows, nv);
    t.v.expect((s.v.status == SatStatus::Sat) == sat, "LA verdict differs, round " + std::to_string(round));
    record(t, s, "LA round " + std::to_string(round));
  }
}

// difference constraints against Bellman-Ford; returns the DL closure tally through `closure`
void suite_dl(std::mt19937_64& rng, Tally& t, Verdicts& closure, int& closure_n) {
  for (int round = 0; round < 150; ++round) {
    bool ints = round % 2;
    int nv = 3 + static_cast<int>(rng() % 4), nl = 3 + static_cast<int>(rng() % 6);
    std::vector<oracle::Edge> edges;
    std::string text = std::string("(set-logic ") + (ints ? "IDL" : "RDL") + ")\n" + decls("x", nv, ints ? "Int" : "Real");
    for (int i = 0; i < nl; ++i) {
      int u = static_cast<int>(rng() % nv), v = static_cast<int>(rng() % nv);
      while (v == u) v = static_cast<int>(rng() % nv);
      long w = static_cast<long>(rng() % 9) - 4;
      edges.push_back({u, v, w});
      bool in_a = i == 0 ? true : i == 1 ? false : rng() % 2;
      text += std::string(in_a ? "(assert-A" : "(assert-B") + " (<= (- x" + std::to_string(v) + " x" +
              std::to_string(u) + ") " + q_str(w) + "))\n";
    }
    Solved s = solve_text(text);
    ++t.cases;
    bool sat = !oracle::bf_negative_cycle(nv, edges);
    t.v.expect(s.v.logic == (ints ? Logic::IDL : Logic::RDL), "DL file dispatched elsewhere");
    t.v.expect((s.v.status == SatStatus::Sat) == sat, "DL verdict differs, round " + std::to_string(round));
    record(t, s, "DL round " + std::to_string(round));
    for (auto& i : s.v.interpolants) {
      ++closure_n;
      closure.expect(Shape::max(*s.p.ctx, i) == 0, "DL interpolant not DL-shaped: " + str(s.p, i));
    }
  }
}

// UTVPI over bounded integers against box enumeration
void suite_utvpi(std::mt19937_64& rng, Tally& t, Verdicts& closure, int& closure_n, int& implications) {
  constexpr int kRadius = 5;
  for (int round = 0; round < 150; ++round) {
    int nv = 2 + static_cast<int>(rng() % 3), nl = 3 + static_cast<int>(rng() % 5);
    std::vector<oracle::Row> rows;
    std::string text = "(set-logic UTVPI-Z)\n" + decls("x", nv, "Int");
    auto add = [&](bool in_a, std::vector<std::pair<int, int>> terms, long c) {
      // sum(s x) <= c  as  0 <= c - sum(s x)
      oracle::Row r;
      r.a.assign(nv, 0);
      std::string lhs = "(+";
      for (auto [v, sgn] : terms) {
        r.a[v] -= sgn;
        lhs += std::string(sgn > 0 ? " x" : " (- x") + std::to_string(v) + (sgn > 0 ? "" : ")");
      }
      lhs += ")";
      r.c = c;
      rows.push_back(r);
      text += std::string(in_a ? "(assert-A" : "(assert-B") + " (<= " + lhs + " " + q_str(c) + "))\n";
    };
    for (int v = 0; v < nv; ++v) {
      add(rng() % 2, {{v, 1}}, kRadius);
      add(rng() % 2, {{v, -1}}, kRadius);
    }
    for (int i = 0; i < nl; ++i) {
      int u = static_cast<int>(rng() % nv), v = static_cast<int>(rng() % nv);
      while (v == u) v = static_cast<int>(rng() % nv);
      int su = rng() % 2 ? 1 : -1, sv = rng() % 2 ? 1 : -1;
      long c = static_cast<long>(rng() % 9) - 5;
      bool in_a = i == 0 ? true : i == 1 ? false : rng() % 2;
      add(in_a, {{u, su}, {v, sv}}, c);
    }
    Solved s = solve_text(text);
    ++t.cases;
    bool sat = oracle::box_sat(rows, nv, kRadius);
    t.v.expect((s.v.status == SatStatus::Sat) == sat, "UTVPI verdict differs, round " + std::to_string(round));
    record(t, s, "UTVPI round " + std::to_string(round));
    for (auto& i : s.v.interpolants) {
      ++closure_n;
      closure.expect(Shape::max(*s.p.ctx, i) <= 1, "UTVPI interpolant leaves UTVPI: " + str(s.p, i));
      std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f->kind == FKind::Implies) ++implications;
        for (auto& k : f->kids) walk(k);
      };
      walk(i);
    }
  }
}

// equalities over a0..a3 and f, A on a0..a2, B on a1..a3, against naive congruence closure
void suite_euf(std::mt19937_64& rng, Tally& t) {
  for (int round = 0; round < 150; ++round) {
    oracle::EufProblem op;
    // terms: a_i, f(a_i), f(f(a_i))
    for (int i = 0; i < 4; ++i) op.terms.push_back(oracle::Term{"", i, {}});
    for (int i = 0; i < 4; ++i) op.terms.push_back(oracle::Term{"f", -1, {i}});
    for (int i = 0; i < 4; ++i) op.terms.push_back(oracle::Term{"f", -1, {4 + i}});
    auto name = [](int t) {
      int v = t % 4;
      std::string a = "a" + std::to_string(v);
      return t < 4 ? a : t < 8 ? "(f " + a + ")" : "(f (f " + a + "))";
    };
    std::string text = "(set-logic EUF)\n(declare-sort U)\n" + decls("a", 4, "U") + "(declare-fun f (U) U)\n";
    int nl = 3 + static_cast<int>(rng() % 5);
    for (int i = 0; i < nl; ++i) {
      bool in_a = i == 0 ? true : i == 1 ? false : rng() % 2;
      int lo = in_a ? 0 : 1;
      int x = static_cast<int>(rng() % 3) * 4 + lo + static_cast<int>(rng() % 3);
      int y = static_cast<int>(rng() % 3) * 4 + lo + static_cast<int>(rng() % 3);
      if (x == y) y = (y % 4 == lo + 2) ? y - 1 : y + 1;
      bool diseq = rng() % 4 == 0;
      (diseq ? op.diseqs : op.eqs).push_back({x, y});
      std::string eq = "(= " + name(x) + " " + name(y) + ")";
      text += std::string(in_a ? "(assert-A " : "(assert-B ") + (diseq ? "(not " + eq + ")" : eq) + ")\n";
    }
    Solved s = solve_text(text);
    ++t.cases;
    t.v.expect((s.v.status == SatStatus::Sat) == oracle::euf_sat(op), "EUF verdict differs, round " + std::to_string(round));
    record(t, s, "EUF round " + std::to_string(round));
  }
}

// combined EUF+LRA against the arrangement oracle, with the split audit on every refutation
void suite_combined(Tally& t, Tally& audit, size_t& splits) {
  testing_support::RandomComb g(static_cast<unsigned>(kSeed));
  for (int round = 0; round < 170; ++round) {
    std::vector<testing_support::RandomComb::L> ls;
    std::string text = "(set-logic EUF+LRA)\n(declare-fun f (Real) Real)\n" + decls("x", 4, "Real");
    int n = g.pick(5, 9);
    if (round % 3 == 2) {
      for (auto& [l, in_a] : g.planted()) {
        ls.push_back(l);
        text += std::string(in_a ? "(assert-A " : "(assert-B ") + l.text + ")\n";
      }
      n = g.pick(0, 2);
    }
    bool has_a = false, has_b = false;
    for (int i = 0; i < n; ++i) {
      bool in_a = g.pick(0, 1);
      ls.push_back(g.gen(in_a ? 0 : 1));
      (in_a ? has_a : has_b) = true;
      text += std::string(in_a ? "(assert-A " : "(assert-B ") + ls.back().text + ")\n";
    }
    if (round % 3 != 2 && (!has_a || !has_b)) {
      ls.push_back(g.gen(has_a ? 1 : 0));
      text += std::string(has_a ? "(assert-B " : "(assert-A ") + ls.back().text + ")\n";
    }
    ++t.cases;
    Solved s;
    try {
      s = solve_text(text, Logic::EUF_LRA);
    } catch (const std::exception& e) {
      t.v.expect(false, "combined round " + std::to_string(round) + ": " + e.what());
      std::fprintf(stderr, "combined round %d failed: %s\n%s", round, e.what(), text.c_str());
      continue;
    }
    bool sat = testing_support::RandomComb::oracle_sat(ls);
    t.v.expect((s.v.status == SatStatus::Sat) == sat, "combined verdict differs, round " + std::to_string(round));
    record(t, s, "combined round " + std::to_string(round));
    if (s.v.status != SatStatus::Unsat) continue;

    // root preservation, validity and growth for the split on a fresh refutation
    Problem p = parse_problem(text);
    DtcRun run = run_dtc(*p.ctx, p.parts);
    ++audit.cases;
    std::string tag = "round " + std::to_string(round);
    IeAudit a0 = audit_ie_local(run.proof, run.catalog.ie);
    audit.v.expect(a0.ok, tag + ": base proof not ie-local: " + a0.message);
    std::set<AtomId> ie = run.catalog.ie;
    SplitStats st;
    Proof q = split_ab_mixed(*p.ctx, run.proof, run.partition, 1, ie, &st);
    splits += st.splits.size();
    audit.v.expect(q.node(q.root()).clause == run.proof.node(run.proof.root()).clause, tag + ": root changed");
    ProofCheck pc = check_proof(q, lemma_checker(*p.ctx));
    audit.v.expect(pc.ok, tag + ": split proof: " + pc.message);
    audit.v.expect(st.nodes_after <= st.nodes_before + 2 * st.splits.size(),
                   tag + ": " + std::to_string(st.nodes_after) + " > " + std::to_string(st.nodes_before) + " + 2*" +
                       std::to_string(st.splits.size()));
    for (int nd : q.reachable(q.root()))
      for (Lit l : q.node(nd).clause)
        audit.v.expect(run.partition.atom_side(*p.ctx, l.atom(), 1) != Side::Mixed, tag + ": mixed atom survives");
    IeAudit a1 = audit_ie_local(q, ie);
    audit.v.expect(a1.ok, tag + ": split proof not ie-local: " + a1.message);
  }
}

// sequence interpolants over 3 and 4 parts
void suite_sequence(std::mt19937_64& rng, Tally& t) {
  for (int round = 0; round < 400 && t.unsat < 120; ++round) {
    int nparts = 3 + round % 2, nv = 4;
    std::string text = "(set-logic LRA)\n" + decls("x", nv, "Real");
    // a cycle x0 <= x1 <= ... <= x0 - d spread over the parts, plus noise
    int hops = 3 + static_cast<int>(rng() % 2);
    for (int h = 0; h < hops; ++h) {
      int u = h % nv, v = (h + 1) % hops % nv;
      long d = h + 1 == hops ? static_cast<long>(rng() % 3) : 0;
      int part = 1 + static_cast<int>(rng() % nparts);
      text += "(assert-part " + std::to_string(part) + " (<= (+ x" + std::to_string(u) + " " + q_str(d) + ") x" +
              std::to_string(v) + "))\n";
    }
    for (int k = 1; k <= nparts; ++k) {
      int u = static_cast<int>(rng() % nv), v = static_cast<int>(rng() % nv);
      long c = static_cast<long>(rng() % 7) - 3;
      text += "(assert-part " + std::to_string(k) + " (<= (+ x" + std::to_string(u) + " (* 2 x" + std::to_string(v) +
              ")) " + q_str(c) + "))\n";
    }
    Solved s = solve_text(text, Logic::LRA);
    ++t.cases;
    record(t, s, "sequence round " + std::to_string(round));
    if (s.v.status == SatStatus::Unsat)
      t.v.expect(static_cast<int>(s.v.interpolants.size()) == nparts - 1, "wrong number of interpolants");
  }
}

}  // namespace

int main() {
  Report rep;
  Hygiene hy;
  std::printf("acceptance: golden limit %.0f ms each, property suites >= %d cases, total < %.0f s, seed %llu\n",
              kGoldenMaxMs, kMinCases, kPropertyMaxSeconds, static_cast<unsigned long long>(kSeed));

  auto guard = [&](const std::string& id, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      rep.line(id, false, std::string("exception: ") + e.what());
    }
  };
  guard("golden/bool-lra-mixed", [&] { golden_mixed(rep, hy); });
  guard("golden/lra-hand-and-tableau", [&] { golden_lra(rep, hy); });
  guard("golden/diseq", [&] { golden_diseq(rep, hy); });
  guard("golden/strengthening", [&] { golden_strengthen(rep, hy); });
  guard("golden/rdl-graph", [&] { golden_rdl(rep, hy); });
  guard("golden/utvpi-z-witnesses", [&] { golden_utvpi(rep, hy); });
  guard("golden/euf-lra-split", [&] { golden_dtc(rep, hy); });

  auto t0 = Clock::now();
  std::mt19937_64 rng(kSeed);
  Tally la, dl, ut, euf, comb, audit, seq;
  Verdicts dl_closure, ut_closure;
  int dl_closure_n = 0, ut_closure_n = 0, implications = 0;
  size_t splits = 0;
  guard("property/la-suite", [&] { suite_la(rng, la); });
  guard("property/dl-suite", [&] { suite_dl(rng, dl, dl_closure, dl_closure_n); });
  guard("property/utvpi-suite", [&] { suite_utvpi(rng, ut, ut_closure, ut_closure_n, implications); });
  guard("property/euf-suite", [&] { suite_euf(rng, euf); });
  guard("property/combined-suite", [&] { suite_combined(comb, audit, splits); });
  guard("property/sequence-suite", [&] { suite_sequence(rng, seq); });
  double secs = ms_since(t0) / 1000.0;

  {
    Verdicts c;
    int total = 0;
    std::string counts;
    const std::pair<const char*, Tally*> suites[] = {{"LA", &la},     {"DL", &dl},       {"UTVPI", &ut},
                                                     {"EUF", &euf},   {"EUF+LA", &comb}, {"seq", &seq}};
    for (auto [name, t] : suites) {
      total += t->interpolants;
      counts += std::string(counts.empty() ? "" : ", ") + name + " " + std::to_string(t->interpolants);
      c.expect(t->cases >= kMinCases, std::string(name) + " has only " + std::to_string(t->cases) + " cases");
      c.expect(t->interpolants > 0, std::string(name) + " produced no interpolant");
      if (!t->v.ok) c.expect(false, t->v.first);
    }
    rep.line("property/craig-triple-check", c.ok, c.detail(std::to_string(total) + " validated (" + counts + ")"));
  }
  auto oracle_line = [&](const std::string& id, const Tally& t, const std::string& what) {
    Verdicts c = t.v;
    c.expect(t.cases >= kMinCases, "only " + std::to_string(t.cases) + " cases");
    rep.line(id, c.ok, c.detail(t.counts() + " vs " + what));
  };
  oracle_line("property/dl-vs-bellman-ford", dl, "Bellman-Ford");
  oracle_line("property/la-vs-fourier-motzkin", la, "Fourier-Motzkin (<= 5 vars)");
  oracle_line("property/utvpi-z-vs-enumeration", ut, "integer box enumeration (<= 4 vars)");
  oracle_line("property/euf-vs-congruence", euf, "naive congruence closure");
  oracle_line("property/euf+la-vs-arrangements", comb, "arrangement enumeration");
  {
    Verdicts c = seq.v;
    c.expect(seq.unsat >= kMinCases, "only " + std::to_string(seq.unsat) + " unsat sequence cases");
    rep.line("property/sequence-chain", c.ok, c.detail(seq.counts() + "; chain and per-cut checks"));
  }
  {
    Verdicts c;
    if (!dl_closure.ok) c.expect(false, dl_closure.first);
    if (!ut_closure.ok) c.expect(false, ut_closure.first);
    c.expect(dl_closure_n >= kMinCases / 2 && ut_closure_n >= kMinCases / 2, "too few interpolants to judge");
    rep.line("property/language-closure", c.ok,
             c.detail(std::to_string(dl_closure_n) + " DL and " + std::to_string(ut_closure_n) + " UTVPI interpolants, " +
                      std::to_string(implications) + " implications"));
  }
  {
    Verdicts c = audit.v;
    c.expect(audit.cases >= kMinCases, "only " + std::to_string(audit.cases) + " refutations audited");
    c.expect(splits > 0, "no AB-mixed equality was ever split");
    rep.line("property/split-audit", c.ok,
             c.detail(std::to_string(audit.cases) + " refutations, " + std::to_string(splits) + " splits"));
  }
  {
    std::ostringstream d;
    d.precision(2);
    d << std::fixed << secs << " s";
    rep.line("property/time-budget", secs < kPropertyMaxSeconds, d.str());
  }
  {
    Verdicts c = hy.v;
    c.expect(hy.proofs >= 13, "only " + std::to_string(hy.proofs) + " golden proofs");
    rep.line("hygiene/golden-proofs", c.ok,
             c.detail(std::to_string(hy.proofs) + " proofs, " + std::to_string(hy.lemmas) + " lemmas re-verified"));
  }
  std::printf("%s: %d failing\n", rep.failed ? "FAILED" : "ALL PASS", rep.failed);
  return rep.failed ? 1 : 0;
}
