#include "doctest.h"
#include "sepveri/printer.hpp"
#include "support/builders.hpp"

using namespace sepveri;
using namespace tb;

TEST_CASE("term ordering prefers literals, then program vars, then logic vars") {
  CHECK(term_cmp(iv(3), pv("x")) < 0);
  CHECK(term_cmp(nil_addr(), pv("x")) < 0);
  CHECK(term_cmp(pv("x"), lv("v")) < 0);
  CHECK(term_cmp(pv("x"), pre("x")) < 0);
  CHECK(term_cmp(pre("x"), lv("a")) < 0);
  CHECK(term_cmp(lv("a"), fld(pv("x"), "next")) < 0);
  CHECK(term_cmp(ctor("nil"), pv("x")) < 0); // nullary ctors sit with literals
  CHECK(term_cmp(iv(1), iv(2)) < 0);
  CHECK(term_eq(fld(pv("x"), "next"), fld(pv("x"), "next")));
  CHECK(!term_eq(fld(pv("x"), "next"), fld(pv("x"), "data")));
}

TEST_CASE("printer canonical forms") {
  CHECK(print_term(iv(42)) == "42");
  CHECK(print_term(iv(kIntMax)) == "INT_MAX");
  CHECK(print_term(iv(kIntMin)) == "INT_MIN");
  CHECK(print_term(pre("x")) == "x@pre");
  CHECK(print_term(ctor("cons", {lvz("a"), lvs("l'", "intlist")})) == "cons(a, l')");
  CHECK(print_spatial(cell(pv("x"), "next", lv("y"))) == "x -> next == y");
  CHECK(print_spatial(SpatialAtom::has_permission(fld(pv("node"), "pstPrev"))) ==
        "has_permission(&(node -> pstPrev))");
  CHECK(print_spatial(SpatialAtom::points_to(pv("p"), lvz("u"))) == "*p == u");

  SymbolicHeap h = heap({{"v", sort_int()}, {"y", sort_addr()}},
                        {ne(pv("x"), nil_addr())},
                        {cell(pv("x"), "next", lv("y")), cell(pv("x"), "data", lvz("v")),
                         pred("listrep", {lv("y")})});
  CHECK(print_heap(h) ==
        "exists v y, x != NULL && x -> next == y * x -> data == v * listrep(y)");

  SymbolicHeap e = heap({}, {eq(pv("x"), nil_addr())}, {});
  CHECK(print_heap(e) == "x == NULL && emp");

  CHECK(print_term(mul(pvz("w"), pvz("h"))) == "w * h");
  CHECK(print_term(add(pvz("a"), mul(pvz("b"), pvz("c")))) == "a + b * c");
  CHECK(print_term(mul(add(pvz("a"), pvz("b")), pvz("c"))) == "(a + b) * c");
}

TEST_CASE("printer multi-branch assertions") {
  Assertion a;
  a.branches.push_back(
      Branch{"2dlist", heap({}, {eq(pv("p"), pv("q"))}, {SpatialAtom::points_to(pv("p"), lvz("u"))})});
  a.branches.push_back(Branch{"3dlist", heap({}, {}, {SpatialAtom::points_to(pv("p"), lvz("u")),
                                                      SpatialAtom::points_to(pv("q"), lvz("v"))})});
  CHECK(print_assertion(a) == "2dlist: p == q && *p == u || 3dlist: *p == u * *q == v");
}
