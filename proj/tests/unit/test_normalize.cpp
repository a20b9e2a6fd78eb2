#include "doctest.h"
#include "sepveri/models.hpp"
#include "sepveri/normalize.hpp"
#include "sepveri/printer.hpp"
#include "support/builders.hpp"

#include <random>

using namespace sepveri;
using namespace tb;

TEST_CASE("duplicate cell after equality propagation is contradictory") {
  // x == y && x->next == a * y->next == b
  SymbolicHeap h = heap({}, {eq(pv("x"), pv("y"))},
                        {cell(pv("x"), "next", lv("a")), cell(pv("y"), "next", lv("b"))});
  CHECK(!normalize(h).has_value());

  // oracle cross-check: no concrete heap satisfies it
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 2;
  bound.int_lo = 0;
  bound.int_hi = 0;
  auto ms = bounded_models(h, env, bound);
  CHECK(ms.models.empty());
  CHECK(!ms.truncated);
}

TEST_CASE("emp unit law") {
  SymbolicHeap h = heap({}, {}, {SpatialAtom::emp(), pred("listrep", {pv("x")})});
  auto n = normalize(h);
  REQUIRE(n.has_value());
  CHECK(print_heap(*n) == "listrep(x)");
}

TEST_CASE("t != t is contradictory") {
  SymbolicHeap h = heap({}, {ne(pv("x"), pv("x"))}, {});
  CHECK(!normalize(h).has_value());
}

TEST_CASE("diseq with propagated equality is contradictory") {
  SymbolicHeap h = heap({}, {ne(pv("x"), nil_addr()), eq(pv("x"), nil_addr())}, {});
  CHECK(!normalize(h).has_value());
}

TEST_CASE("constructor clash and injectivity") {
  SymbolicHeap clash =
      heap({}, {eq(ctor("cons", {lvz("a"), lvs("l", "intlist")}), ctor("nil"))}, {});
  CHECK(!normalize(clash).has_value());

  SymbolicHeap inj = heap({}, {eq(ctor("cons", {lvz("a"), lvs("l", "intlist")}),
                                  ctor("cons", {iv(3), lvs("l", "intlist")}))},
                          {});
  auto n = normalize(inj);
  REQUIRE(n.has_value());
  // a == 3 propagated
  bool found = false;
  for (const auto& p : n->pure)
    if (p->kind == PureKind::Cmp && p->op == CmpOp::Eq &&
        ((term_eq(p->lhs, lvz("a")) && term_eq(p->rhs, iv(3)))))
      found = true;
  CHECK(found);
}

TEST_CASE("existential equation elimination") {
  // exists v, v == x->data-ish term: v replaced, binder dropped
  SymbolicHeap h = heap({{"v", sort_int()}}, {eq(lvz("v"), iv(7)), le(lvz("v"), pvz("n"))}, {});
  auto n = normalize(h);
  REQUIRE(n.has_value());
  CHECK(n->exists.empty());
  CHECK(print_heap(*n) == "7 <= n && emp");
}

TEST_CASE("points-to at NULL is contradictory") {
  SymbolicHeap h = heap({}, {eq(pv("x"), nil_addr())}, {cell(pv("x"), "next", lv("y"))});
  CHECK(!normalize(h).has_value());
}

TEST_CASE("ground disjunction pruning") {
  // operateType == 1 && (operateType == 0 || isPointerItem == 0) && isPointerItem == 1
  SymbolicHeap h = heap({}, {eq(pvz("operateType"), iv(1)), eq(pvz("isPointerItem"), iv(1)),
                             PureAtom::disj({eq(pvz("operateType"), iv(0)),
                                             eq(pvz("isPointerItem"), iv(0))})},
                        {});
  CHECK(!normalize(h).has_value());
}

TEST_CASE("normalize is idempotent and semantics-preserving on random heaps") {
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 2;
  bound.int_lo = 0;
  bound.int_hi = 1;
  bound.depth = 2;

  std::mt19937_64 rng(20240811);
  auto rand_term = [&](int pick) -> TermPtr {
    switch (pick % 5) {
      case 0: return pv("x");
      case 1: return pv("y");
      case 2: return lvz("v");
      case 3: return iv(static_cast<int>(pick % 2));
      default: return nil_addr();
    }
  };

  int checked = 0;
  for (int iter = 0; iter < 120; ++iter) {
    SymbolicHeap h;
    int npure = static_cast<int>(rng() % 3);
    for (int i = 0; i < npure; ++i) {
      TermPtr a = rand_term(static_cast<int>(rng()));
      TermPtr b = rand_term(static_cast<int>(rng()));
      // keep comparisons well-sorted: only == / != across mixed picks
      h.pure.push_back(rng() % 2 ? eq(a, b) : ne(a, b));
    }
    int nspatial = static_cast<int>(rng() % 3);
    for (int i = 0; i < nspatial; ++i) {
      switch (rng() % 3) {
        case 0: h.spatial.push_back(cell(rng() % 2 ? pv("x") : pv("y"), "next",
                                         rand_term(static_cast<int>(rng()))));
          break;
        case 1: h.spatial.push_back(pred("listrep", {rng() % 2 ? pv("x") : pv("y")})); break;
        default: h.spatial.push_back(SpatialAtom::emp()); break;
      }
    }

    auto vars = free_vars_sorted(h);
    auto n = normalize(h);
    if (n) {
      auto n2 = normalize(*n);
      REQUIRE(n2.has_value());
      CHECK(heap_eq(*n, *n2)); // idempotent

      auto m1 = bounded_models(h, env, bound, vars);
      auto m2 = bounded_models(*n, env, bound, vars);
      REQUIRE(!m1.truncated);
      REQUIRE(!m2.truncated);
      REQUIRE(m1.models.size() == m2.models.size());
      for (std::size_t i = 0; i < m1.models.size(); ++i)
        CHECK(model_cmp(m1.models[i], m2.models[i]) == 0);
      ++checked;
    } else {
      auto m1 = bounded_models(h, env, bound, vars);
      REQUIRE(!m1.truncated);
      CHECK(m1.models.empty());
      ++checked;
    }
  }
  CHECK(checked == 120);
}
