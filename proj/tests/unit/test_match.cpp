#include "doctest.h"
#include "sepveri/entail.hpp"
#include "sepveri/printer.hpp"
#include "support/builders.hpp"

#include <fstream>

using namespace sepveri;
using namespace tb;

namespace {

std::vector<Strategy> load_list_strategies(const LogicEnv& env) {
  std::ifstream in(std::string(SEPVERI_REPO_ROOT) + "/strategies/list.strat");
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_strategy_file(text, "list.strat", env);
}

Strategy make_simple(const LogicEnv& env, const std::string& text) {
  auto ss = parse_strategy_file(text, "inline.strat", env);
  REQUIRE(ss.size() == 1);
  return ss[0];
}

} // namespace

TEST_CASE("exhaustive matching returns every candidate atom") {
  LogicEnv env = test_env();
  Strategy s = make_simple(env,
                           "priority: 1;\n"
                           "left: listrep(?x) at 0;\n"
                           "action: left_erase(0);\n");
  FreshGen fresh;
  SymbolicHeap left = heap({}, {}, {pred("listrep", {pv("p")}), pred("listrep", {pv("r")})});
  SymbolicHeap right = heap({}, {}, {});
  EntailmentGoal g = EntailmentGoal::make(left, right, fresh);
  auto matches = match_pattern(s, g, env);
  REQUIRE(matches.size() == 2);
  CHECK(print_term(matches[0].bindings.at("?x")) == "p");
  CHECK(print_term(matches[1].bindings.at("?x")) == "r");
}

TEST_CASE("matching works modulo the goal's equalities") {
  LogicEnv env = test_env();
  Strategy s = make_simple(env,
                           "priority: 1;\n"
                           "left: ?x -> next == ?y at 0;\n"
                           "action: left_erase(0);\n");
  FreshGen fresh;
  SymbolicHeap left = heap({}, {eq(lv("a"), pv("p"))}, {cell(pv("p"), "next", pv("q"))});
  EntailmentGoal g = EntailmentGoal::make(left, heap({}, {}, {}), fresh);
  auto matches = match_pattern(s, g, env);
  REQUIRE(matches.size() == 1);
  // the binding is the atom's own term, congruent to `a` via a == p
  Congruence cc;
  cc.add_equation(lv("a"), pv("p"));
  CHECK(cc.equal(matches[0].bindings.at("?x"), lv("a")));
}

TEST_CASE("pattern on an empty side yields no matches") {
  LogicEnv env = test_env();
  Strategy s = make_simple(env,
                           "priority: 1;\n"
                           "right: listrep(?x) at 0;\n"
                           "action: right_erase(0);\n");
  FreshGen fresh;
  EntailmentGoal g = EntailmentGoal::make(heap({}, {}, {}), heap({}, {}, {}), fresh);
  CHECK(match_pattern(s, g, env).empty());
}

TEST_CASE("applying the listrep unfold replaces the predicate by its body") {
  LogicEnv env = test_env();
  auto strategies = load_list_strategies(env);
  FreshGen fresh;
  SymbolicHeap left = heap({}, {ne(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  SymbolicHeap right = heap({{"v", sort_int()}}, {},
                            {SpatialAtom::points_to(fld(pv("x"), "next"), lvz("v"))});
  EntailmentGoal g = EntailmentGoal::make(left, right, fresh);

  const Strategy* unfold = nullptr;
  Match chosen;
  for (const auto& s : strategies) {
    auto ms = match_pattern(s, g, env);
    if (!ms.empty()) {
      unfold = &s;
      chosen = ms[0];
      break;
    }
  }
  REQUIRE(unfold);
  auto r = apply_strategy(*unfold, chosen, g, env, fresh);
  REQUIRE(r.status == ApplyStatus::Applied);
  CHECK(print_heap(r.goal.left) ==
        "x != NULL && x -> next == y0 * x -> data == v0 * listrep(y0)");
}

TEST_CASE("explicit instantiate action records the witness") {
  LogicEnv env = test_env();
  Strategy s = make_simple(env,
                           "priority: 1;\n"
                           "right: exists v, ?x -> next == ?v at 0;\n"
                           "left: ?x -> next == ?y at 1;\n"
                           "action: instantiate(v -> ?y);\n");
  FreshGen fresh;
  SymbolicHeap left = heap({}, {}, {cell(pv("x"), "next", lv("y0"))});
  SymbolicHeap right = heap({{"v", sort_addr()}}, {},
                            {SpatialAtom::points_to(fld(pv("x"), "next"), lv("v"))});
  EntailmentGoal g = EntailmentGoal::make(left, right, fresh);
  auto ms = match_pattern(s, g, env);
  REQUIRE(!ms.empty());
  auto r = apply_strategy(s, ms[0], g, env, fresh);
  REQUIRE(r.status == ApplyStatus::Applied);
  REQUIRE(r.goal.instantiation.count("v"));
  CHECK(print_term(r.goal.instantiation.at("v")) == "y0");
  CHECK(r.goal.right.exists.empty());
  REQUIRE(r.goal.right.spatial.size() == 1);
  CHECK(print_spatial(r.goal.right.spatial[0]) == "x -> next == y0");
}

TEST_CASE("failing infer check blocks the strategy") {
  LogicEnv env = test_env();
  Strategy s = make_simple(env,
                           "priority: 1;\n"
                           "left: listrep(?x) at 0;\n"
                           "check: infer(?x != NULL);\n"
                           "action: left_erase(0);\n");
  FreshGen fresh;
  SymbolicHeap left = heap({}, {}, {pred("listrep", {pv("x")})});
  EntailmentGoal g = EntailmentGoal::make(left, heap({}, {}, {}), fresh);
  auto ms = match_pattern(s, g, env);
  REQUIRE(ms.size() == 1);
  auto r = apply_strategy(s, ms[0], g, env, fresh);
  CHECK(r.status == ApplyStatus::CheckFailed);
  CHECK(r.detail.find("infer") == 0);
}

TEST_CASE("left_absent check") {
  LogicEnv env = test_env();
  Strategy s = make_simple(env,
                           "priority: 1;\n"
                           "left: listrep(?x) at 0;\n"
                           "check: left_absent(?x == NULL);\n"
                           "action: left_erase(0);\n");
  FreshGen fresh;
  SymbolicHeap with = heap({}, {eq(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  EntailmentGoal g1 = EntailmentGoal::make(with, heap({}, {}, {}), fresh);
  auto ms = match_pattern(s, g1, env);
  if (!ms.empty())
    CHECK(apply_strategy(s, ms[0], g1, env, fresh).status == ApplyStatus::CheckFailed);

  SymbolicHeap without = heap({}, {}, {pred("listrep", {pv("x")})});
  EntailmentGoal g2 = EntailmentGoal::make(without, heap({}, {}, {}), fresh);
  ms = match_pattern(s, g2, env);
  REQUIRE(!ms.empty());
  CHECK(apply_strategy(s, ms[0], g2, env, fresh).status == ApplyStatus::Applied);
}
