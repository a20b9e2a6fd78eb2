#pragma once

#include "sepveri/formula.hpp"
#include "sepveri/normalize.hpp"

#include <map>
#include <string>
#include <vector>

namespace sepveri {

struct CtorDef {
  std::string name;
  std::vector<Sort> arg_sorts;
};

// An inductive (or, with no constructors, uninterpreted) logical sort.
struct SortDef {
  std::string name;
  std::vector<CtorDef> ctors;

  bool is_inductive() const { return !ctors.empty(); }
};

struct FunEquation {
  std::vector<TermPtr> patterns; // argument patterns: vars or constructor shapes
  TermPtr rhs;
};

// Declared pure function; without equations it is uninterpreted.
struct PureFunDef {
  std::string name;
  std::vector<Sort> arg_sorts;
  Sort result = sort_unknown();
  std::vector<FunEquation> equations;
};

// Everything the logic side knows: sorts, pure functions, spatial predicates,
// pure predicates (declared, uninterpreted).
struct LogicEnv {
  std::map<std::string, SortDef> sorts;
  std::map<std::string, PureFunDef> funs;
  PredTable preds;

  const SortDef* find_sort(const std::string& n) const;
  const PureFunDef* find_fun(const std::string& n) const;
  const PredicateDef* find_pred(const std::string& n) const;
  const SortDef* sort_of_ctor(const std::string& ctor, const CtorDef** out = nullptr) const;
};

/// Applies defining equations innermost-first until no rule fires (bounded).
TermPtr rewrite_with_equations(const TermPtr& t, const LogicEnv& env, int fuel = 4096);

} // namespace sepveri
