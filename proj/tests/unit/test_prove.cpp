#include "doctest.h"
#include "sepveri/models.hpp"
#include "sepveri/pure_solver.hpp"
#include "support/builders.hpp"

#include <random>

using namespace sepveri;
using namespace tb;

TEST_CASE("nonlinear products stay unknown") {
  // {0 <= w <= 100, 0 <= h <= 100} |- w*h <= INT_MAX  ->  Unknown(nonlinear)
  LogicEnv env = test_env();
  std::vector<PurePtr> hyps = {le(iv(0), pvz("width")), le(pvz("width"), iv(100)),
                               le(iv(0), pvz("height")), le(pvz("height"), iv(100))};
  auto r = prove_atom(hyps, le(mul(pvz("width"), pvz("height")), iv(kIntMax)), env);
  CHECK(!r.proved());
  CHECK(r.reason == "nonlinear");
}

TEST_CASE("equality substitution proves pointer disequality goals") {
  // {x != NULL, x == y} |- y != NULL
  LogicEnv env = test_env();
  std::vector<PurePtr> hyps = {ne(pv("x"), nil_addr()), eq(pv("x"), pv("y"))};
  auto r = prove_atom(hyps, ne(pv("y"), nil_addr()), env);
  CHECK(r.proved());
}

TEST_CASE("linear consequence of an equality hypothesis") {
  // {n == 0} |- n <= 0
  LogicEnv env = test_env();
  auto r = prove_atom({eq(pvz("n"), iv(0))}, le(pvz("n"), iv(0)), env);
  CHECK(r.proved());
}

TEST_CASE("equation rewriting discharges fst/snd goals") {
  LogicEnv env = test_env_dll();
  auto p = ctor("pair", {lvz("a"), lv("b")});
  auto r = prove_atom({}, eq(fn("fst", {p}), lvz("a")), env);
  CHECK(r.proved());
  auto r2 = prove_atom({}, eq(fn("snd", {p}), lv("b")), env);
  CHECK(r2.proved());
}

TEST_CASE("app equations reduce ground list goals") {
  LogicEnv env = test_env();
  // app(cons(1, nil), cons(2, nil)) == cons(1, cons(2, nil))
  auto lhs = fn("app", {ctor("cons", {iv(1), ctor("nil")}), ctor("cons", {iv(2), ctor("nil")})});
  auto rhs = ctor("cons", {iv(1), ctor("cons", {iv(2), ctor("nil")})});
  auto r = prove_atom({}, eq(lhs, rhs), env);
  CHECK(r.proved());
}

TEST_CASE("reflexive goals after substitution") {
  LogicEnv env = test_env();
  auto t = fn("app", {lvs("l", "intlist"), ctor("cons", {lvz("v"), ctor("nil")})});
  auto r = prove_atom({}, eq(t, t), env);
  CHECK(r.proved());
}

TEST_CASE("monotonicity: extra hypotheses never lose a proof") {
  LogicEnv env = test_env();
  std::vector<PurePtr> hyps = {le(pvz("i"), iv(10)), ge(pvz("i"), iv(0))};
  PurePtr goal = le(pvz("i"), iv(20));
  auto r1 = prove_atom(hyps, goal, env);
  REQUIRE(r1.proved());
  hyps.push_back(ne(pvz("i"), iv(5)));
  hyps.push_back(le(pvz("j"), pvz("i")));
  auto r2 = prove_atom(hyps, goal, env);
  CHECK(r2.proved());
}

TEST_CASE("contradictory hypotheses prove anything") {
  LogicEnv env = test_env();
  auto r = prove_atom({le(pvz("x"), iv(3)), ge(pvz("x"), iv(5))},
                      eq(pvz("q"), iv(42)), env);
  CHECK(r.proved());
  CHECK(r.reason == "hyps-contradictory");
}

TEST_CASE("disjunctive goals prove when one disjunct proves") {
  LogicEnv env = test_env();
  auto goal = PureAtom::disj({eq(pvz("n"), iv(1)), le(pvz("n"), iv(0))});
  auto r = prove_atom({eq(pvz("n"), iv(0))}, goal, env);
  CHECK(r.proved());
  auto r2 = prove_atom({}, goal, env);
  CHECK(!r2.proved());
  CHECK(r2.reason == "disjunctive-goal");
}

TEST_CASE("integer tightening of strict comparisons") {
  LogicEnv env = test_env();
  // {0 < i, i < 2} |- i == 1 over the integers
  auto r = prove_atom({lt(iv(0), pvz("i")), lt(pvz("i"), iv(2))}, eq(pvz("i"), iv(1)), env);
  CHECK(r.proved());
}

TEST_CASE("random soundness sample against brute force") {
  LogicEnv env = test_env();
  std::mt19937_64 rng(31337);
  auto rterm = [&]() -> TermPtr {
    int k = static_cast<int>(rng() % 4);
    if (k == 0) return pvz("a");
    if (k == 1) return pvz("b");
    if (k == 2) return pvz("c");
    return iv(static_cast<int>(rng() % 9) - 4);
  };
  auto ratom = [&]() -> PurePtr {
    CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
    return PureAtom::cmp(ops[rng() % 6], rterm(), rterm());
  };
  int violations = 0;
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<PurePtr> hyps;
    int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) hyps.push_back(ratom());
    PurePtr goal = ratom();
    auto r = prove_atom(hyps, goal, env);
    if (!r.proved()) continue;
    // exhaustive a,b,c in [-8,8]
    for (int a = -8; a <= 8 && !violations; ++a)
      for (int b = -8; b <= 8 && !violations; ++b)
        for (int c = -8; c <= 8 && !violations; ++c) {
          CStore store{{"a", CValue::of_int(a)}, {"b", CValue::of_int(b)},
                       {"c", CValue::of_int(c)}};
          bool hyps_hold = true;
          for (const auto& h : hyps) {
            auto v = eval_pure(h, store, env);
            if (!v || !*v) {
              hyps_hold = false;
              break;
            }
          }
          if (!hyps_hold) continue;
          auto g = eval_pure(goal, store, env);
          if (g && !*g) violations++;
        }
  }
  CHECK(violations == 0);
}
