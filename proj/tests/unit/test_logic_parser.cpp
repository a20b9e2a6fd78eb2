#include "doctest.h"
#include "sepveri/diag.hpp"
#include "sepveri/logic_parser.hpp"
#include "sepveri/models.hpp"
#include "sepveri/printer.hpp"

using namespace sepveri;

namespace {

const char* kListLogic = R"(
// singly-linked lists
sort intlist = nil | cons(Z, intlist);

func app(intlist, intlist) : intlist {
  app(nil, m) => m;
  app(cons(h, t), m) => cons(h, app(t, m));
}

predicate listrep(x: addr) :=
  x == NULL && emp
  || exists v y, x != NULL && x -> next == y && x -> data == v && listrep(y);

predicate sll(x: addr, l: intlist) :=
  x == NULL && l == nil && emp
  || exists v y l', x != NULL && l == cons(v, l') &&
     x -> data == v && x -> next == y && sll(y, l');
)";

} // namespace

TEST_CASE("parses sorts, functions with equations, and predicates") {
  LogicEnv env = parse_logic(kListLogic, "list.logic");
  REQUIRE(env.sorts.count("intlist"));
  CHECK(env.sorts.at("intlist").ctors.size() == 2);
  REQUIRE(env.funs.count("app"));
  CHECK(env.funs.at("app").equations.size() == 2);
  REQUIRE(env.preds.count("listrep"));
  REQUIRE(env.preds.count("sll"));

  const PredicateDef& lr = env.preds.at("listrep");
  REQUIRE(lr.body.branches.size() == 2);
  CHECK(print_heap(lr.body.branches[0].heap) == "x == NULL && emp");
  CHECK(print_heap(lr.body.branches[1].heap) ==
        "exists v y, x != NULL && x -> next == y * x -> data == v * listrep(y)");

  // sorts were inferred for the predicate existentials
  const SymbolicHeap& cons_case = env.preds.at("sll").body.branches[1].heap;
  for (const auto& b : cons_case.exists) {
    if (b.name == "v") CHECK(b.sort.name == "Z");
    if (b.name == "y") CHECK(b.sort.name == "addr");
    if (b.name == "l'") CHECK(b.sort.name == "intlist");
  }
}

TEST_CASE("equations evaluate through the oracle rewriter") {
  LogicEnv env = parse_logic(kListLogic, "list.logic");
  // app(cons(1,nil), cons(2,nil)) rewrites to cons(1, cons(2, nil))
  auto one = Term::int_lit(1), two = Term::int_lit(2);
  auto nil = Term::app("nil", {}, AppKind::Ctor, Sort{"intlist"});
  auto l1 = Term::app("cons", {one, nil}, AppKind::Ctor, Sort{"intlist"});
  auto l2 = Term::app("cons", {two, nil}, AppKind::Ctor, Sort{"intlist"});
  auto t = rewrite_with_equations(Term::app("app", {l1, l2}, AppKind::PureFun, Sort{"intlist"}),
                                  env);
  CHECK(print_term(t) == "cons(1, cons(2, nil))");
}

TEST_CASE("unknown sort and duplicate constructor are rejected") {
  try {
    parse_logic("predicate p(x: wat) := x == NULL && emp;", "t.logic");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::UnknownSort);
  }
  try {
    parse_logic("sort a = mk(Z); sort b = mk(addr);", "t.logic");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::DuplicateDefinition);
  }
}

TEST_CASE("predicate arity errors surface at use sites") {
  try {
    parse_logic("predicate p(x: addr) := p(x, x);", "t.logic");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::ArityMismatch);
  }
}

TEST_CASE("uninterpreted sorts and functions parse") {
  LogicEnv env = parse_logic(
      "sort map;\n"
      "sort tree = leaf | node(tree, Z, tree);\n"
      "func tree_map(tree) : map;\n"
      "func map_delete(Z, map) : map;\n"
      "func tree_delete(Z, tree) : tree;\n"
      "predicate store_tree(x: addr, t: tree) := x == NULL && t == leaf && emp;\n"
      "predicate store_map(x: addr, m: map) := exists t, m == tree_map(t) && store_tree(x, t);\n",
      "tree.logic");
  CHECK(!env.sorts.at("map").is_inductive());
  CHECK(env.funs.at("tree_map").equations.empty());
  const auto& sm = env.preds.at("store_map");
  CHECK(sm.body.branches[0].heap.exists[0].sort.name == "tree");
}
