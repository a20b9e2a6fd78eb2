#include "doctest.h"
#include "sepveri/models.hpp"
#include "sepveri/printer.hpp"
#include "support/builders.hpp"

using namespace sepveri;
using namespace tb;

TEST_CASE("x == NULL && emp has exactly the null-store empty-heap models") {
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 3;
  SymbolicHeap h = heap({}, {eq(pv("x"), nil_addr())}, {});
  auto ms = bounded_models(h, env, bound);
  REQUIRE(ms.models.size() == 1);
  CHECK(ms.models[0].heap.empty());
  CHECK(cvalue_eq(ms.models[0].store.at("x"), CValue::null()));
}

TEST_CASE("listrep model count matches the closed-form sum") {
  // addresses <= 3, data in {0,1}, depth 3: lists of length 0..3.
  // count = sum over k of P(3,k) * 2^k = 1 + 6 + 24 + 48 = 79.
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 3;
  bound.int_lo = 0;
  bound.int_hi = 1;
  bound.depth = 3;
  SymbolicHeap h = heap({}, {}, {pred("listrep", {pv("x")})});
  auto ms = bounded_models(h, env, bound);
  REQUIRE(!ms.truncated);
  CHECK(ms.models.size() == 79);

  // every heap has 2 cells per node
  for (const auto& m : ms.models) CHECK(m.heap.size() % 2 == 0);
}

TEST_CASE("contradictory heap has no models") {
  LogicEnv env = test_env();
  ModelBound bound;
  SymbolicHeap h = heap({}, {ne(pv("x"), pv("x"))}, {});
  auto ms = bounded_models(h, env, bound);
  CHECK(ms.models.empty());
}

TEST_CASE("has_permission is implied by a points-to model") {
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 1;
  bound.int_lo = 0;
  bound.int_hi = 0;

  SymbolicHeap pts = heap({}, {}, {cell(pv("x"), "next", nil_addr())});
  SymbolicHeap perm = heap({}, {}, {SpatialAtom::has_permission(fld(pv("x"), "next"))});

  auto vars = free_vars_sorted(pts);
  auto mp = bounded_models(pts, env, bound, vars);
  REQUIRE(!mp.models.empty());
  for (const auto& m : mp.models)
    CHECK(satisfies(perm, m.store, m.heap, env, bound));

  // but not the reverse: a permission model holding uninit is not a points-to
  auto mq = bounded_models(perm, env, bound, vars);
  bool found_uninit = false;
  for (const auto& m : mq.models)
    for (const auto& [loc, v] : m.heap)
      if (v->kind == CValue::Kind::Uninit) {
        found_uninit = true;
        CHECK(!satisfies(pts, m.store, m.heap, env, bound));
      }
  CHECK(found_uninit);
}

TEST_CASE("budget exhaustion reports a truncated set") {
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 3;
  bound.int_lo = -2;
  bound.int_hi = 2;
  bound.depth = 3;
  bound.node_budget = 50;
  SymbolicHeap h = heap({}, {}, {pred("listrep", {pv("x")}), pred("listrep", {pv("y")})});
  auto ms = bounded_models(h, env, bound);
  CHECK(ms.truncated);
}

TEST_CASE("store_dll enumerates circular doubly-linked lists") {
  LogicEnv env = test_env_dll();
  ModelBound bound;
  bound.max_addr = 2;
  bound.int_lo = 0;
  bound.int_hi = 0;
  bound.depth = 2;
  bound.ctor_depth = 2;
  SymbolicHeap h = heap({}, {}, {pred("store_dll", {pv("x"), lvs("l", "plist")})});
  auto ms = bounded_models(h, env, bound);
  REQUIRE(!ms.truncated);
  // empty list: x->pstPrev == x, x->pstNext == x (2 cells), for x in {1,2}.
  // one-node list at the other address adds 2+3 cells.
  int empties = 0, singles = 0;
  for (const auto& m : ms.models) {
    if (m.heap.size() == 2) empties++;
    if (m.heap.size() == 5) singles++;
  }
  CHECK(empties == 2);
  CHECK(singles == 2);
  CHECK(ms.models.size() == 4);
}
