#include "doctest.h"
#include "sepveri/models.hpp"
#include "sepveri/normalize.hpp"
#include "sepveri/printer.hpp"
#include "support/builders.hpp"

using namespace sepveri;
using namespace tb;

namespace {

std::size_t find_pred(const SymbolicHeap& h, const std::string& name) {
  for (std::size_t i = 0; i < h.spatial.size(); ++i)
    if (h.spatial[i].kind == SpatialKind::PredApp && h.spatial[i].pred == name) return i;
  REQUIRE(false);
  return 0;
}

} // namespace

TEST_CASE("unfolding listrep under x != NULL prunes the nil case") {
  LogicEnv env = test_env();
  SymbolicHeap h = heap({}, {ne(pv("x"), nil_addr())}, {pred("listrep", {pv("x")})});
  FreshGen fresh;
  Assertion out = unfold(h, find_pred(h, "listrep"), env.preds, fresh);
  REQUIRE(out.branches.size() == 1);
  CHECK(print_heap(out.branches[0].heap) ==
        "exists v y, x != NULL && x -> next == y * x -> data == v * listrep(y)");
}

TEST_CASE("unfolding listrep with unknown nullness keeps both cases") {
  LogicEnv env = test_env();
  SymbolicHeap h = heap({}, {}, {pred("listrep", {pv("x")})});
  FreshGen fresh;
  Assertion out = unfold(h, 0, env.preds, fresh);
  REQUIRE(out.branches.size() == 2);
  CHECK(print_heap(out.branches[0].heap) == "x == NULL && emp");
  CHECK(print_heap(out.branches[1].heap) ==
        "exists v y, x != NULL && x -> next == y * x -> data == v * listrep(y)");
}

TEST_CASE("unfolding dllseg_shift under l == nil collapses to the base case") {
  LogicEnv env = test_env_dll();
  SymbolicHeap h = heap({}, {eq(lvs("l", "plist"), ctor("nil"))},
                        {pred("dllseg_shift", {lv("px"), lv("py"), lvs("l", "plist")})});
  FreshGen fresh;
  Assertion out = unfold(h, 0, env.preds, fresh);
  REQUIRE(out.branches.size() == 1);
  CHECK(print_heap(out.branches[0].heap) == "px == py && l == nil && emp");
}

TEST_CASE("unfold is semantics-preserving at one less depth") {
  LogicEnv env = test_env();
  ModelBound bound;
  bound.max_addr = 3;
  bound.int_lo = 0;
  bound.int_hi = 1;
  bound.depth = 3;

  SymbolicHeap h = heap({}, {}, {pred("listrep", {pv("x")})});
  FreshGen fresh;
  Assertion unfolded = unfold(h, 0, env.preds, fresh);

  auto vars = free_vars_sorted(h);
  auto original = bounded_models(h, env, bound, vars);

  ModelBound inner = bound;
  inner.depth = bound.depth - 1;
  auto expanded = bounded_models(unfolded, env, inner, vars);

  REQUIRE(!original.truncated);
  REQUIRE(!expanded.truncated);
  REQUIRE(original.models.size() == expanded.models.size());
  for (std::size_t i = 0; i < original.models.size(); ++i)
    CHECK(model_cmp(original.models[i], expanded.models[i]) == 0);
}
