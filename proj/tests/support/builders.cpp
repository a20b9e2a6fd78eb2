#include "support/builders.hpp"

namespace tb {

SymbolicHeap heap(std::vector<BoundVar> ex, std::vector<PurePtr> pure,
                  std::vector<SpatialAtom> spatial) {
  SymbolicHeap h;
  h.exists = std::move(ex);
  h.pure = std::move(pure);
  h.spatial = std::move(spatial);
  return h;
}

namespace {

Branch br(SymbolicHeap h) { return Branch{std::nullopt, std::move(h)}; }

PredicateDef listrep_def() {
  PredicateDef d;
  d.name = "listrep";
  d.params = {{"x", sort_addr()}};
  TermPtr x = lv("x");
  SymbolicHeap nil_case = heap({}, {eq(x, nil_addr())}, {});
  SymbolicHeap cons_case =
      heap({{"v", sort_int()}, {"y", sort_addr()}},
           {ne(x, nil_addr())},
           {cell(x, "next", lv("y")), cell(x, "data", lvz("v"))});
  d.body.branches = {br(nil_case), br(cons_case)};
  d.body.branches[1].heap.spatial.push_back(pred("listrep", {lv("y")}));
  return d;
}

PredicateDef lseg_def() {
  PredicateDef d;
  d.name = "lseg";
  d.params = {{"x", sort_addr()}, {"y", sort_addr()}};
  TermPtr x = lv("x"), y = lv("y");
  SymbolicHeap nil_case = heap({}, {eq(x, y)}, {});
  SymbolicHeap cons_case =
      heap({{"v", sort_int()}, {"z", sort_addr()}},
           {ne(x, nil_addr())},
           {cell(x, "next", lv("z")), cell(x, "data", lvz("v")),
            pred("lseg", {lv("z"), y})});
  d.body.branches = {br(nil_case), br(cons_case)};
  return d;
}

PredicateDef sll_def() {
  PredicateDef d;
  d.name = "sll";
  d.params = {{"x", sort_addr()}, {"l", Sort{"intlist"}}};
  TermPtr x = lv("x"), l = lvs("l", "intlist");
  SymbolicHeap nil_case = heap({}, {eq(x, nil_addr()), eq(l, ctor("nil"))}, {});
  SymbolicHeap cons_case =
      heap({{"v", sort_int()}, {"y", sort_addr()}, {"l'", Sort{"intlist"}}},
           {ne(x, nil_addr()), eq(l, ctor("cons", {lvz("v"), lvs("l'", "intlist")}))},
           {cell(x, "data", lvz("v")), cell(x, "next", lv("y")),
            pred("sll", {lv("y"), lvs("l'", "intlist")})});
  d.body.branches = {br(nil_case), br(cons_case)};
  return d;
}

PredicateDef sllseg_def() {
  PredicateDef d;
  d.name = "sllseg";
  d.params = {{"x", sort_addr()}, {"y", sort_addr()}, {"l", Sort{"intlist"}}};
  TermPtr x = lv("x"), y = lv("y"), l = lvs("l", "intlist");
  SymbolicHeap nil_case = heap({}, {eq(x, y), eq(l, ctor("nil"))}, {});
  SymbolicHeap cons_case =
      heap({{"v", sort_int()}, {"z", sort_addr()}, {"l'", Sort{"intlist"}}},
           {ne(x, nil_addr()), eq(l, ctor("cons", {lvz("v"), lvs("l'", "intlist")}))},
           {cell(x, "data", lvz("v")), cell(x, "next", lv("z")),
            pred("sllseg", {lv("z"), y, lvs("l'", "intlist")})});
  d.body.branches = {br(nil_case), br(cons_case)};
  return d;
}

} // namespace

LogicEnv test_env() {
  LogicEnv env;
  env.sorts["intlist"] = SortDef{
      "intlist",
      {CtorDef{"nil", {}}, CtorDef{"cons", {sort_int(), Sort{"intlist"}}}}};

  PureFunDef app;
  app.name = "app";
  app.arg_sorts = {Sort{"intlist"}, Sort{"intlist"}};
  app.result = Sort{"intlist"};
  {
    FunEquation e1;
    e1.patterns = {ctor("nil"), lvs("m", "intlist")};
    e1.rhs = lvs("m", "intlist");
    FunEquation e2;
    e2.patterns = {ctor("cons", {lvz("h"), lvs("t", "intlist")}), lvs("m", "intlist")};
    e2.rhs = ctor("cons", {lvz("h"), fn("app", {lvs("t", "intlist"), lvs("m", "intlist")})});
    app.equations = {e1, e2};
  }
  env.funs["app"] = app;

  env.preds["listrep"] = listrep_def();
  env.preds["lseg"] = lseg_def();
  env.preds["sll"] = sll_def();
  env.preds["sllseg"] = sllseg_def();
  return env;
}

LogicEnv test_env_dll() {
  LogicEnv env;
  env.sorts["pair"] = SortDef{"pair", {CtorDef{"pair", {sort_int(), sort_addr()}}}};
  env.sorts["plist"] = SortDef{
      "plist", {CtorDef{"nil", {}}, CtorDef{"cons", {Sort{"pair"}, Sort{"plist"}}}}};

  PureFunDef fst;
  fst.name = "fst";
  fst.arg_sorts = {Sort{"pair"}};
  fst.result = sort_int();
  {
    FunEquation e;
    e.patterns = {ctor("pair", {lvz("a"), lv("b")})};
    e.rhs = lvz("a");
    fst.equations = {e};
  }
  env.funs["fst"] = fst;

  PureFunDef snd;
  snd.name = "snd";
  snd.arg_sorts = {Sort{"pair"}};
  snd.result = sort_addr();
  {
    FunEquation e;
    e.patterns = {ctor("pair", {lvz("a"), lv("b")})};
    e.rhs = lv("b");
    snd.equations = {e};
  }
  env.funs["snd"] = snd;

  // dllseg_shift(px, py, l): nodes between px and py, ownership shifted so
  // px's pstNext cell is included but py's is not.
  {
    PredicateDef d;
    d.name = "dllseg_shift";
    d.params = {{"px", sort_addr()}, {"py", sort_addr()}, {"l", Sort{"plist"}}};
    TermPtr px = lv("px"), py = lv("py"), l = lvs("l", "plist");
    SymbolicHeap nil_case = heap({}, {eq(px, py), eq(l, ctor("nil"))}, {});
    SymbolicHeap cons_case = heap(
        {{"x", sort_addr()}, {"a", Sort{"pair"}}, {"l'", Sort{"plist"}}},
        {eq(l, ctor("cons", {lvs("a", "pair"), lvs("l'", "plist")})),
         eq(lv("x"), fn("snd", {lvs("a", "pair")}))},
        {cell(lv("x"), "pstData", fn("fst", {lvs("a", "pair")})),
         cell(lv("x"), "pstPrev", px), cell(px, "pstNext", lv("x")),
         pred("dllseg_shift", {lv("x"), py, lvs("l'", "plist")})});
    d.body.branches = {Branch{std::nullopt, nil_case}, Branch{std::nullopt, cons_case}};
    env.preds["dllseg_shift"] = d;
  }

  {
    PredicateDef d;
    d.name = "dllseg_shift_rev";
    d.params = {{"x", sort_addr()}, {"y", sort_addr()}, {"l", Sort{"plist"}}};
    TermPtr x = lv("x"), y = lv("y"), l = lvs("l", "plist");
    SymbolicHeap nil_case = heap({}, {eq(x, y), eq(l, ctor("nil"))}, {});
    SymbolicHeap cons_case = heap(
        {{"z", sort_addr()}, {"a", Sort{"pair"}}, {"l'", Sort{"plist"}}},
        {eq(l, ctor("cons", {lvs("a", "pair"), lvs("l'", "plist")})),
         eq(x, fn("snd", {lvs("a", "pair")}))},
        {cell(x, "pstData", fn("fst", {lvs("a", "pair")})), cell(x, "pstNext", lv("z")),
         cell(lv("z"), "pstPrev", x),
         pred("dllseg_shift_rev", {lv("z"), y, lvs("l'", "plist")})});
    d.body.branches = {Branch{std::nullopt, nil_case}, Branch{std::nullopt, cons_case}};
    env.preds["dllseg_shift_rev"] = d;
  }

  {
    PredicateDef d;
    d.name = "store_dll";
    d.params = {{"x", sort_addr()}, {"l", Sort{"plist"}}};
    SymbolicHeap body = heap(
        {{"t", sort_addr()}},
        {},
        {cell(lv("x"), "pstPrev", lv("t")), cell(lv("t"), "pstNext", lv("x")),
         pred("dllseg_shift", {lv("x"), lv("t"), lvs("l", "plist")})});
    d.body.branches = {Branch{std::nullopt, body}};
    env.preds["store_dll"] = d;
  }
  return env;
}

} // namespace tb
