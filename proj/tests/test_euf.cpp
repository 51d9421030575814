#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "smtitp/euf.hpp"
#include "support.hpp"

using namespace smtitp;
using namespace testing_support;

namespace {

// translation of context literals into the oracle's term language
struct OracleTerms {
  const Context& ctx;
  oracle::EufProblem p;
  std::map<TermId, int> idx;

  int term(TermId t) {
    auto it = idx.find(t);
    if (it != idx.end()) return it->second;
    oracle::Term o;
    const TermNode& n = ctx.term(t);
    if (n.kind == TermKind::App) {
      o.fn = ctx.symbol(n.sym).name;
      for (TermId a : n.args) o.args.push_back(term(a));
    } else {
      o.var = static_cast<int>(t);
    }
    p.terms.push_back(o);
    return idx[t] = static_cast<int>(p.terms.size() - 1);
  }
  void lit(Lit l) {
    const AtomNode& n = ctx.atom(l.atom());
    auto e = std::make_pair(term(n.lhs), term(n.rhs));
    (l.neg() ? p.diseqs : p.eqs).push_back(e);
  }
};

bool oracle_sat(const Context& ctx, const std::vector<Lit>& lits) {
  OracleTerms o{ctx, {}, {}};
  for (Lit l : lits) o.lit(l);
  return oracle::euf_sat(o.p);
}

// lits & f unsatisfiable, by enumerating the atoms of f
bool oracle_unsat_with(const Context& ctx, const std::vector<Lit>& lits, const Formula& f) {
  std::vector<AtomId> atoms;
  collect_atoms(f, atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::vector<bool> val(ctx.num_atoms(), false);
  for (uint64_t m = 0; m < (uint64_t{1} << atoms.size()); ++m) {
    std::vector<Lit> all = lits;
    for (size_t i = 0; i < atoms.size(); ++i) {
      val[atoms[i]] = (m >> i) & 1;
      all.push_back(Lit::make(atoms[i], !val[atoms[i]]));
    }
    if (eval(f, val) && oracle_sat(ctx, all)) return false;
  }
  return true;
}

bool oracle_interpolant(const Context& ctx, const std::vector<Lit>& a, const std::vector<Lit>& b, const Formula& i) {
  return oracle_unsat_with(ctx, a, f_not(i)) && oracle_unsat_with(ctx, b, i);
}

bool symbols_common(const Context& ctx, const std::vector<Lit>& a, const std::vector<Lit>& b, const Formula& i) {
  std::set<SymId> sa, sb;
  for (Lit l : a)
    for (SymId s : ctx.atom_symbols(l.atom())) sa.insert(s);
  for (Lit l : b)
    for (SymId s : ctx.atom_symbols(l.atom())) sb.insert(s);
  for (SymId s : formula_symbols(ctx, i))
    if (!sa.count(s) || !sb.count(s)) return false;
  return true;
}

struct UEnv : Env {
  UEnv() {
    decl("(declare-sort U) (declare-fun f (U) U) (declare-fun g (U U) U)");
    decl("(declare-fun a () U) (declare-fun b () U) (declare-fun c () U) (declare-fun x () U) (declare-fun y () U)");
  }
};

}  // namespace

TEST(Congruence, OneStepConflict) {
  UEnv e;
  CongruenceClosure cc(e.ctx);
  Lit ab = e.lit("(= a b)"), d = e.lit("(not (= (f a) (f b)))");
  cc.assert_lit(ab);
  cc.assert_lit(d);
  ASSERT_FALSE(cc.check());
  std::vector<Lit> want = {ab, d};
  EXPECT_EQ(cc.conflict(), want);
}

TEST(Congruence, Transitivity) {
  UEnv e;
  CongruenceClosure cc(e.ctx);
  cc.assert_lit(e.lit("(= a b)"));
  cc.assert_lit(e.lit("(= b c)"));
  EXPECT_TRUE(cc.check());
  EXPECT_TRUE(cc.equal(e.t("a"), e.t("c")));
  EXPECT_EQ(cc.explain(e.t("a"), e.t("c")).size(), 2u);
  EXPECT_FALSE(cc.equal(e.t("a"), e.t("x")));
}

TEST(Congruence, NestedCongruenceAndBacktrack) {
  UEnv e;
  CongruenceClosure cc(e.ctx);
  cc.assert_lit(e.lit("(= a b)"));
  cc.assert_lit(e.lit("(= (f a) c)"));
  cc.assert_lit(e.lit("(not (= (g (f b) x) (g c x)))"));
  EXPECT_FALSE(cc.check());
  EXPECT_EQ(cc.conflict().size(), 3u);
  cc.backtrack(1);
  EXPECT_TRUE(cc.check());
  EXPECT_TRUE(cc.equal(e.t("(f a)"), e.t("(f b)")));
  EXPECT_FALSE(cc.equal(e.t("(f b)"), e.t("c")));
}

TEST(Congruence, PairDeduction) {
  Env e;
  e.decl("(declare-fun f (Real) Real)");
  e.reals({"a1", "a2", "b1", "b2"});
  Lit l1 = e.lit("(= a1 (f a2))"), l2 = e.lit("(= b1 (f b2))"), l3 = e.lit("(= a2 b2)");
  EufHook hook(e.ctx);
  AtomId ie = e.lit("(= a1 b1)").atom();
  hook.add_interface(ie);
  for (Lit l : {l1, l2, l3}) hook.assert_lit(l);
  std::vector<Implication> out;
  hook.implied([](AtomId) { return true; }, out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].lit, Lit::make(ie));
  std::vector<Lit> because = out[0].because;
  std::sort(because.begin(), because.end());
  std::vector<Lit> want = {l1, l2, l3};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(because, want);
}

TEST(Congruence, NoSharedClassesNoDeductions) {
  UEnv e;
  EufHook hook(e.ctx);
  hook.add_interface(e.lit("(= a x)").atom());
  hook.assert_lit(e.lit("(= a b)"));
  std::vector<Implication> out;
  hook.implied([](AtomId) { return true; }, out);
  EXPECT_TRUE(out.empty());
}

TEST(Congruence, RandomAgainstOracle) {
  std::mt19937 rng(7);
  int conflicts = 0;
  for (int round = 0; round < 200; ++round) {
    UEnv e;
    std::vector<TermId> pool = {e.t("a"), e.t("b"), e.t("c"), e.t("x"), e.t("y")};
    SymId f = *e.ctx.find_symbol("f"), g = *e.ctx.find_symbol("g");
    while (pool.size() < 9) {
      TermId s = pool[rng() % pool.size()], t = pool[rng() % pool.size()];
      pool.push_back(rng() % 2 ? e.ctx.mk_app(f, {s}) : e.ctx.mk_app(g, {s, t}));
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }
    std::vector<Lit> lits;
    int n = 4 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) {
      TermId s = pool[rng() % pool.size()], t = pool[rng() % pool.size()];
      if (s == t) continue;
      lits.push_back(Lit::make(e.ctx.mk_teq(s, t), rng() % 3 == 0));
    }
    CongruenceClosure cc(e.ctx);
    for (Lit l : lits) cc.assert_lit(l);
    bool sat = cc.check();
    ASSERT_EQ(sat, oracle_sat(e.ctx, lits)) << "round " << round;
    if (!sat) {
      ++conflicts;
      EXPECT_FALSE(oracle_sat(e.ctx, cc.conflict()));
    }
    // explanations replay and deductions are closed
    std::vector<std::pair<TermId, TermId>> deduced;
    for (size_t i = 0; i < 5; ++i)
      for (size_t j = i + 1; j < 5; ++j)
        if (cc.equal(pool[i], pool[j])) {
          deduced.push_back({pool[i], pool[j]});
          auto mu = cc.explain(pool[i], pool[j]);
          mu.push_back(Lit::make(e.ctx.mk_teq(pool[i], pool[j]), true));
          EXPECT_FALSE(oracle_sat(e.ctx, mu));
        }
    if (sat) {
      for (auto& [s, t] : deduced) cc.assert_lit(Lit::make(e.ctx.mk_teq(s, t)));
      size_t again = 0;
      for (size_t i = 0; i < 5; ++i)
        for (size_t j = i + 1; j < 5; ++j) again += cc.equal(pool[i], pool[j]);
      EXPECT_EQ(again, deduced.size());
    }
  }
  EXPECT_GT(conflicts, 30);
}

TEST(EufInterpolation, CommonLiteral) {
  UEnv e;
  std::vector<Lit> eta = {e.lit("(= a b)"), e.lit("(not (= (f a) (f b)))")};
  Formula i = euf_interpolate(e.ctx, eta, {Side::A, Side::B});
  EXPECT_EQ(e.str(i), e.str(e.f("(= a b)")));
}

TEST(EufInterpolation, TransitivitySummary) {
  UEnv e;
  std::vector<Lit> a = {e.lit("(= x a)"), e.lit("(= a y)")};
  std::vector<Lit> b = {e.lit("(not (= x y))")};
  std::vector<Lit> eta = {a[0], a[1], b[0]};
  Formula i = euf_interpolate(e.ctx, eta, {Side::A, Side::A, Side::B});
  EXPECT_EQ(e.str(i), e.str(e.f("(= x y)")));
  EXPECT_TRUE(oracle_interpolant(e.ctx, a, b, i));
}

TEST(EufInterpolation, DisequalityInA) {
  UEnv e;
  // A: a = f(x), a != f(y); B: x = b, b = y
  std::vector<Lit> a = {e.lit("(= a (f x))"), e.lit("(not (= a (f y)))")};
  std::vector<Lit> b = {e.lit("(= x b)"), e.lit("(= b y)")};
  std::vector<Lit> eta = {a[0], a[1], b[0], b[1]};
  Formula i = euf_interpolate(e.ctx, eta, {Side::A, Side::A, Side::B, Side::B});
  EXPECT_TRUE(oracle_interpolant(e.ctx, a, b, i));
  EXPECT_TRUE(symbols_common(e.ctx, a, b, i));
}

TEST(EufInterpolation, MixedCongruenceSplit) {
  Env e;
  e.decl("(declare-sort U) (declare-fun f (U) U)");
  e.decl("(declare-fun a1 () U) (declare-fun a2 () U) (declare-fun b1 () U) (declare-fun b2 () U) (declare-fun c () U)");
  e.decl("(declare-fun d () U)");
  // f(a2) and f(b2) meet only through f(c)
  std::vector<Lit> a = {e.lit("(= a1 (f a2))"), e.lit("(= a2 c)"), e.lit("(= a1 d)")};
  std::vector<Lit> b = {e.lit("(= b1 (f b2))"), e.lit("(= c b2)"), e.lit("(not (= b1 d))")};
  std::vector<Lit> eta = a;
  eta.insert(eta.end(), b.begin(), b.end());
  Formula i = euf_interpolate(e.ctx, eta, {Side::A, Side::A, Side::A, Side::B, Side::B, Side::B});
  EXPECT_EQ(e.str(i), e.str(e.f("(= d (f c))")));
  EXPECT_TRUE(oracle_interpolant(e.ctx, a, b, i));
  EXPECT_TRUE(symbols_common(e.ctx, a, b, i));
}

TEST(EufInterpolation, DegenerateSides) {
  UEnv e;
  std::vector<Lit> eta = {e.lit("(= a b)"), e.lit("(not (= a b))")};
  EXPECT_EQ(euf_interpolate(e.ctx, eta, {Side::A, Side::A})->kind, FKind::False);
  EXPECT_EQ(euf_interpolate(e.ctx, eta, {Side::B, Side::B})->kind, FKind::True);
}

TEST(EufInterpolation, RandomPairsValidated) {
  std::mt19937 rng(11);
  int validated = 0;
  for (int round = 0; round < 3000 && validated < 120; ++round) {
    Env e;
    e.decl("(declare-sort U) (declare-fun f (U) U) (declare-fun g (U U) U)");
    e.decl("(declare-fun h (U) U) (declare-fun k (U) U)");
    e.decl("(declare-fun a0 () U) (declare-fun a1 () U) (declare-fun b0 () U) (declare-fun b1 () U)");
    e.decl("(declare-fun c0 () U) (declare-fun c1 () U)");
    auto make_pool = [&](const std::vector<std::string>& leaves, const std::string& local) {
      std::vector<TermId> pool;
      for (auto& s : leaves) pool.push_back(e.t(s));
      SymId f = *e.ctx.find_symbol("f"), g = *e.ctx.find_symbol("g"), l = *e.ctx.find_symbol(local);
      while (pool.size() < 8) {
        TermId s = pool[rng() % pool.size()], t = pool[rng() % pool.size()];
        int pick = static_cast<int>(rng() % 3);
        pool.push_back(pick == 0 ? e.ctx.mk_app(f, {s}) : pick == 1 ? e.ctx.mk_app(g, {s, t}) : e.ctx.mk_app(l, {s}));
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
      }
      return pool;
    };
    auto pa = make_pool({"a0", "a1", "c0", "c1"}, "h");
    auto pb = make_pool({"b0", "b1", "c0", "c1"}, "k");
    auto draw = [&](const std::vector<TermId>& pool, int n, bool diseq, std::vector<Lit>& out) {
      for (int i = 0; i < n; ++i) {
        TermId s = pool[rng() % pool.size()], t = pool[rng() % pool.size()];
        if (s != t) out.push_back(Lit::make(e.ctx.mk_teq(s, t), diseq && i == 0));
      }
    };
    std::vector<Lit> a, b;
    bool diseq_in_a = rng() % 2;
    draw(pa, 4, diseq_in_a, a);
    draw(pb, 4, !diseq_in_a, b);
    std::vector<Lit> all = a;
    all.insert(all.end(), b.begin(), b.end());
    if (oracle_sat(e.ctx, all)) continue;
    CongruenceClosure cc(e.ctx);
    for (Lit l : all) cc.assert_lit(l);
    ASSERT_FALSE(cc.check());
    std::vector<Lit> eta = cc.conflict();
    std::vector<Side> sides;
    std::vector<Lit> ea, eb;
    for (Lit l : eta) {
      bool in_a = std::find(a.begin(), a.end(), l) != a.end();
      sides.push_back(in_a ? Side::A : Side::B);
      (in_a ? ea : eb).push_back(l);
    }
    Formula i = euf_interpolate(e.ctx, eta, sides);
    ASSERT_TRUE(oracle_interpolant(e.ctx, ea, eb, i)) << "round " << round << ": " << e.str(i);
    ASSERT_TRUE(symbols_common(e.ctx, ea, eb, i)) << "round " << round << ": " << e.str(i);
    ++validated;
  }
  EXPECT_GE(validated, 100);
}

TEST(EufInterpolatingTerm, PairSplit) {
  Env e;
  e.decl("(declare-fun f (Real) Real)");
  e.reals({"a1", "a2", "b1", "b2", "y"});
  TermId ym1 = e.ctx.mk_lin(LinTerm::of(e.t("y")) + LinTerm::constant(-1));
  std::vector<Lit> mu = {Lit::make(e.ctx.mk_teq(e.t("b1"), e.t("(f b2)"))),
                         Lit::make(e.ctx.mk_teq(e.t("a1"), e.t("(f a2)"))),
                         Lit::make(e.ctx.mk_teq(e.t("a2"), ym1)), Lit::make(e.ctx.mk_teq(ym1, e.t("b2")))};
  std::vector<Side> sides = {Side::B, Side::A, Side::A, Side::B};
  auto t = euf_interpolating_term(e.ctx, e.t("a1"), e.t("b1"), mu, sides);
  ASSERT_TRUE(t);
  TermId want = e.ctx.mk_app(*e.ctx.find_symbol("f"), {ym1});
  EXPECT_EQ(*t, want);
  EXPECT_EQ(e.ctx.term_str(*t), "(f (+ y -1))");
}

TEST(EufInterpolatingTerm, CommonEndpoint) {
  UEnv e;
  std::vector<Lit> mu = {e.lit("(= a b)")};
  auto t = euf_interpolating_term(e.ctx, e.t("a"), e.t("b"), mu, {Side::A}, [](SymId) { return true; });
  ASSERT_TRUE(t);
  // both endpoints shared: a itself qualifies
  EXPECT_EQ(*t, e.t("a"));
}

TEST(EufInterpolatingTerm, RandomChainsCutAtMidpoint) {
  std::mt19937 rng(5);
  for (int round = 0; round < 100; ++round) {
    Env e;
    e.decl("(declare-sort U)");
    int na = 1 + static_cast<int>(rng() % 4), nb = 1 + static_cast<int>(rng() % 4);
    std::vector<TermId> chain;
    for (int i = 0; i < na; ++i) {
      e.decl("(declare-fun p" + std::to_string(i) + " () U)");
      chain.push_back(e.t("p" + std::to_string(i)));
    }
    e.decl("(declare-fun m () U)");
    chain.push_back(e.t("m"));
    for (int i = 0; i < nb; ++i) {
      e.decl("(declare-fun q" + std::to_string(i) + " () U)");
      chain.push_back(e.t("q" + std::to_string(i)));
    }
    std::vector<Lit> mu;
    std::vector<Side> sides;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
      mu.push_back(Lit::make(e.ctx.mk_teq(chain[i], chain[i + 1])));
      sides.push_back(static_cast<int>(i) < na ? Side::A : Side::B);
    }
    std::vector<size_t> order(mu.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Lit> mu2;
    std::vector<Side> s2;
    for (size_t k : order) {
      mu2.push_back(mu[k]);
      s2.push_back(sides[k]);
    }
    auto t = euf_interpolating_term(e.ctx, chain.front(), chain.back(), mu2, s2);
    ASSERT_TRUE(t);
    EXPECT_EQ(*t, e.t("m"));
  }
}
