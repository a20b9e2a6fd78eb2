#include "doctest.h"
#include "sepveri/entail.hpp"
#include "sepveri/models.hpp"
#include "sepveri/printer.hpp"
#include "support/builders.hpp"

#include <fstream>

using namespace sepveri;
using namespace tb;

namespace {

std::vector<Strategy> list_strategies(const LogicEnv& env) {
  std::ifstream in(std::string(SEPVERI_REPO_ROOT) + "/strategies/list.strat");
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_strategy_file(text, "list.strat", env);
}

} // namespace

TEST_CASE("frame inference folds listrep from its cells") {
  // n == 0 && p->data == 0 && listrep(p->next) * listrep(r) |-- ?F * listrep(p)
  LogicEnv env = test_env();
  auto strategies = list_strategies(env);
  FreshGen fresh;
  SymbolicHeap left = heap({{"w", sort_addr()}},
                           {eq(pvz("n"), iv(0))},
                           {cell(pv("p"), "data", iv(0)), cell(pv("p"), "next", lv("w")),
                            pred("listrep", {lv("w")}), pred("listrep", {pv("r")})});
  SymbolicHeap right = heap({}, {}, {pred("listrep", {pv("p")})});
  auto r = solve(left, right, strategies, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);
  REQUIRE(r.frame.size() == 1);
  CHECK(print_spatial(r.frame[0]) == "listrep(r)");
  CHECK(r.pure_vcs.empty());
}

TEST_CASE("load entailment unfolds on demand and instantiates the value") {
  // x != NULL && listrep(x) |-- exists v, x->next == v * ?F
  LogicEnv env = test_env();
  auto strategies = list_strategies(env);
  FreshGen fresh;
  SymbolicHeap left = heap({}, {ne(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  SymbolicHeap right = heap({{"v", sort_addr()}}, {},
                            {SpatialAtom::points_to(fld(pv("x"), "next"), lv("v"))});
  auto r = solve(left, right, strategies, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);
  REQUIRE(r.instantiation.count("v"));
  CHECK(print_term(r.instantiation.at("v")) == "y0");
  REQUIRE(r.frame.size() == 2);
  CHECK(print_spatial(r.frame[0]) == "x -> data == v0");
  CHECK(print_spatial(r.frame[1]) == "listrep(y0)");
  CHECK(!r.trace.empty());
}

TEST_CASE("emp entails emp with an empty frame") {
  LogicEnv env = test_env();
  FreshGen fresh;
  auto r = solve(heap({}, {}, {}), heap({}, {}, {}), {}, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);
  CHECK(r.frame.empty());
  CHECK(r.pure_vcs.empty());
}

TEST_CASE("contradictory left sides are vacuously valid") {
  LogicEnv env = test_env();
  FreshGen fresh;
  SymbolicHeap left = heap({}, {ne(pv("x"), pv("x"))}, {});
  SymbolicHeap right = heap({}, {}, {pred("listrep", {pv("q")})});
  auto r = solve(left, right, {}, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);
  CHECK(r.vacuous);
}

TEST_CASE("unsolvable goals get stuck with a residual") {
  LogicEnv env = test_env();
  FreshGen fresh;
  SymbolicHeap left = heap({}, {}, {});
  SymbolicHeap right = heap({}, {}, {pred("listrep", {pv("q")})});
  auto r = solve(left, right, {}, env, fresh);
  REQUIRE(r.status == SolveStatus::Stuck);
  CHECK(!r.residual.right.spatial.empty());
}

TEST_CASE("frame-forbidden mode consumes empty predicates at return") {
  // listrep(x) && x == NULL |-- emp with no frame allowed
  LogicEnv env = test_env();
  auto strategies = list_strategies(env);
  FreshGen fresh;
  SymbolicHeap left = heap({}, {eq(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  SolveOptions opts;
  opts.frame_allowed = false;
  auto r = solve(left, heap({}, {}, {}), strategies, env, fresh, opts);
  REQUIRE(r.status == SolveStatus::Success);
  CHECK(r.frame.empty());
}

TEST_CASE("value mismatches on matched cells become pure proof obligations") {
  LogicEnv env = test_env();
  FreshGen fresh;
  SymbolicHeap left = heap({}, {eq(pvz("n"), iv(3))},
                           {SpatialAtom::points_to(pv("p"), add(pvz("n"), iv(1)))});
  SymbolicHeap right = heap({}, {}, {SpatialAtom::points_to(pv("p"), iv(4))});
  auto r = solve(left, right, {}, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);
  REQUIRE(r.pure_vcs.size() == 1);
  CHECK(print_pure(r.pure_vcs[0].goal) == "3 + 1 == 4"); // n == 3 propagated
}

TEST_CASE("budget exhaustion is reported") {
  LogicEnv env = test_env();
  auto strategies = list_strategies(env);
  FreshGen fresh;
  // an unfold chain that cannot finish: right wants a cell of a fresh list
  SymbolicHeap left = heap({}, {ne(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  SymbolicHeap right = heap({}, {}, {SpatialAtom::points_to(fld(pv("q"), "next"), lvz("u"))});
  SolveOptions opts;
  opts.budget = 3;
  auto r = solve(left, right, strategies, env, fresh, opts);
  CHECK((r.status == SolveStatus::Stuck || r.status == SolveStatus::BudgetExceeded));
}

TEST_CASE("cancellation terminates: right spatial shrinks monotonically") {
  LogicEnv env = test_env();
  FreshGen fresh;
  SymbolicHeap left = heap({}, {},
                           {cell(pv("a"), "next", pv("b")), cell(pv("b"), "next", pv("c")),
                            cell(pv("c"), "next", nil_addr())});
  SymbolicHeap right = heap({}, {},
                            {cell(pv("c"), "next", nil_addr()), cell(pv("a"), "next", pv("b"))});
  auto r = solve(left, right, {}, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);
  CHECK(r.frame.size() == 1);
  CHECK(print_spatial(r.frame[0]) == "b -> next == c");
}

TEST_CASE("solve success is semantically sound on bounded models") {
  LogicEnv env = test_env();
  auto strategies = list_strategies(env);
  ModelBound bound;
  bound.max_addr = 3;
  bound.int_lo = 0;
  bound.int_hi = 0;
  bound.depth = 3;

  FreshGen fresh;
  SymbolicHeap left = heap({}, {ne(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  SymbolicHeap right = heap({{"v", sort_addr()}}, {},
                            {SpatialAtom::points_to(fld(pv("x"), "next"), lv("v"))});
  auto r = solve(left, right, strategies, env, fresh);
  REQUIRE(r.status == SolveStatus::Success);

  // every model of the left satisfies right[instantiation] * frame
  SymbolicHeap rhs;
  rhs.pure = {};
  SymbolicHeap rr = right;
  rr.exists.clear();
  TermMap inst = r.instantiation;
  for (auto& s : rr.spatial) rhs.spatial.push_back(subst_spatial(s, inst));
  for (auto& p : rr.pure) rhs.pure.push_back(subst_pure(p, inst));
  for (const auto& f : r.frame) rhs.spatial.push_back(f);
  // leftover instantiation witnesses mention fresh universals (v0, y0): they
  // are existentially quantified in the claim
  std::set<std::string> lv_names, pv_names;
  rhs.collect_vars(lv_names, pv_names);
  SymbolicHeap left_n = left;
  std::set<std::string> left_lv, left_pv;
  left_n.collect_vars(left_lv, left_pv);
  for (const auto& v : lv_names)
    if (!left_lv.count(v)) rhs.exists.push_back(BoundVar{v, sort_unknown()});

  auto vars = free_vars_sorted(left);
  auto ms = bounded_models(left, env, bound, vars);
  REQUIRE(!ms.models.empty());
  ModelBound rb = bound;
  rb.depth = bound.depth + static_cast<int>(r.trace.size()) + 2;
  int violations = 0;
  for (const auto& m : ms.models)
    if (!satisfies(rhs, m.store, m.heap, env, rb)) violations++;
  CHECK(violations == 0);
}
