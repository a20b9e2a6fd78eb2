#include "doctest.h"
#include "sepveri/strategy.hpp"
#include "support/builders.hpp"

using namespace sepveri;

namespace {

const char* kUnfold = R"(
// unfold listrep on the left when the head is needed and known non-null
priority: 1;
left: listrep(?x) at 0;
check: infer(?x != NULL);
action: forall_add(v0), forall_add(y0), left_erase(0),
        left_add(?x -> data == v0), left_add(?x -> next == y0), left_add(listrep(y0));
)";

} // namespace

TEST_CASE("parses a full strategy with patterns, checks and actions") {
  LogicEnv env = tb::test_env();
  auto strategies = parse_strategy_file(kUnfold, "list.strat", env);
  REQUIRE(strategies.size() == 1);
  const Strategy& s = strategies[0];
  CHECK(s.priority == 1);
  REQUIRE(s.patterns.size() == 1);
  CHECK(!s.patterns[0].right);
  CHECK(s.patterns[0].slot == 0);
  CHECK(s.patterns[0].spatial);
  CHECK(s.patterns[0].atom.pred == "listrep");
  REQUIRE(s.checks.size() == 1);
  CHECK(s.checks[0].kind == StrategyCheck::Kind::Infer);
  REQUIRE(s.ops.size() == 6);
  CHECK(s.ops[0].kind == StrategyOp::Kind::ForallAdd);
  CHECK(s.ops[2].kind == StrategyOp::Kind::LeftErase);
  CHECK(s.ops[3].kind == StrategyOp::Kind::LeftAdd);
}

TEST_CASE("empty file yields an empty strategy list") {
  LogicEnv env = tb::test_env();
  CHECK(parse_strategy_file("", "e.strat", env).empty());
  CHECK(parse_strategy_file("// nothing here\n", "e.strat", env).empty());
}

TEST_CASE("actions referencing unbound pattern variables are rejected") {
  LogicEnv env = tb::test_env();
  const char* bad =
      "priority: 1;\n"
      "left: listrep(?x) at 0;\n"
      "action: left_add(listrep(?y));\n";
  try {
    parse_strategy_file(bad, "bad.strat", env);
    FAIL("expected UnboundPatternVariable");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::UnboundPatternVariable);
  }
}

TEST_CASE("erase slots must refer to matched patterns") {
  LogicEnv env = tb::test_env();
  const char* bad =
      "priority: 1;\n"
      "left: listrep(?x) at 0;\n"
      "action: left_erase(3);\n";
  try {
    parse_strategy_file(bad, "bad.strat", env);
    FAIL("expected SlotOutOfRange");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::SlotOutOfRange);
  }
}

TEST_CASE("right patterns can bind existentials and instantiate them") {
  LogicEnv env = tb::test_env();
  const char* txt =
      "priority: 2;\n"
      "right: exists v, ?x -> next == ?v at 0;\n"
      "left: ?x -> next == ?y at 1;\n"
      "action: instantiate(v -> ?y);\n";
  auto ss = parse_strategy_file(txt, "inst.strat", env);
  REQUIRE(ss.size() == 1);
  REQUIRE(ss[0].patterns.size() == 2);
  CHECK(ss[0].patterns[0].right);
  REQUIRE(ss[0].patterns[0].exist_binders.size() == 1);
  CHECK(ss[0].patterns[0].exist_binders[0] == "v");
  REQUIRE(ss[0].ops.size() == 1);
  CHECK(ss[0].ops[0].kind == StrategyOp::Kind::Instantiate);
  CHECK(ss[0].ops[0].var == "v");
}

TEST_CASE("multiple strategies keep file order for tie-breaking") {
  LogicEnv env = tb::test_env();
  const char* two =
      "priority: 5;\n"
      "left: listrep(?x) at 0;\n"
      "action: left_erase(0);\n"
      "priority: 5;\n"
      "right: listrep(?x) at 0;\n"
      "action: right_erase(0);\n";
  auto ss = parse_strategy_file(two, "two.strat", env);
  REQUIRE(ss.size() == 2);
  CHECK(ss[0].file_order == 0);
  CHECK(ss[1].file_order == 1);
}
