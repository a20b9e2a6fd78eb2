#pragma once

#include "sepveri/decls.hpp"
#include "sepveri/diag.hpp"
#include "sepveri/formula.hpp"

#include <string>
#include <vector>

namespace sepveri {

// One rewriting rule of the entailment engine. Pattern variables appear as
// logical variables named "?x"; `exist_binders` lists pattern variables that
// must bind right-side existential variables.

struct StrategyPattern {
  bool right = false;
  int slot = 0;
  bool spatial = false;
  PurePtr pure;
  SpatialAtom atom;
  std::vector<std::string> exist_binders; // names without the '?'
  SourceLoc loc;
};

struct StrategyCheck {
  enum class Kind { Infer, LeftAbsent, RightAbsent } kind;
  PurePtr formula;
  SourceLoc loc;
};

struct StrategyOp {
  enum class Kind {
    LeftAdd,
    RightAdd,
    LeftErase,
    RightErase,
    ForallAdd,
    RightExistAdd,
    Instantiate,
  } kind;
  bool spatial = false; // for adds
  PurePtr pure;
  SpatialAtom atom;
  int slot = 0;      // erases
  std::string var;   // forall_add / right_exist_add / instantiate target
  TermPtr term;      // instantiate payload
  SourceLoc loc;
};

struct Strategy {
  int priority = 0;
  std::vector<StrategyPattern> patterns;
  std::vector<StrategyCheck> checks;
  std::vector<StrategyOp> ops;
  int file_order = 0; // tie-break among equal priorities
  std::string origin; // file:line for traces
};

/// Parses and validates a .strat file against the logic environment.
std::vector<Strategy> parse_strategy_file(const std::string& text, const std::string& filename,
                                          const LogicEnv& env);

} // namespace sepveri
