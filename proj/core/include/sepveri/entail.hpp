#pragma once

#include "sepveri/congruence.hpp"
#include "sepveri/decls.hpp"
#include "sepveri/pure_solver.hpp"
#include "sepveri/strategy.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sepveri {

// One entailment goal: left |-- exists x̄, right * ?Frame. Left existentials
// are opened as goal universals before solving; right existentials are
// tracked and instantiated during cancellation or by strategies.
struct EntailmentGoal {
  SymbolicHeap left;                      // exists list empty (universals opened)
  SymbolicHeap right;                     // exists list = remaining existentials
  TermMap instantiation;                  // right existential -> witness
  std::vector<PurePtr> side_conditions;   // facts proved by infer checks
  std::vector<std::string> trace;         // applied strategies, in order
  int budget = 64;

  static EntailmentGoal make(const SymbolicHeap& left, const SymbolicHeap& right,
                             FreshGen& fresh, int budget = 64);
};

struct Match {
  // pattern slot -> atom index on its side; -1 keys pure atoms by (side,index)
  std::map<std::pair<bool, int>, std::size_t> slots; // (right?, slot) -> atom idx
  std::map<std::pair<bool, int>, bool> slot_is_pure;
  TermMap bindings; // pattern var name (with '?') -> term
};

/// All ways `s` matches `g`, deterministic order; empty when none.
std::vector<Match> match_pattern(const Strategy& s, const EntailmentGoal& g, const LogicEnv& env);

enum class ApplyStatus { Applied, CheckFailed, SlotOutOfRange };

struct ApplyResult {
  ApplyStatus status = ApplyStatus::Applied;
  std::string detail; // which check failed
  EntailmentGoal goal;
};

/// Checks then executes the action atomically; the goal is renormalized.
ApplyResult apply_strategy(const Strategy& s, const Match& m, const EntailmentGoal& g,
                           const LogicEnv& env, FreshGen& fresh, const SolverConfig& cfg = {});

struct SolveVC {
  std::vector<PurePtr> hyps;
  PurePtr goal;
  bool has_existential = false; // uninstantiated right existential remains
};

enum class SolveStatus { Success, Stuck, BudgetExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::Stuck;
  std::vector<SpatialAtom> frame;
  std::vector<SolveVC> pure_vcs;
  TermMap instantiation;
  std::vector<std::string> trace;
  EntailmentGoal residual; // for diagnostics on Stuck
  bool vacuous = false;    // left side was contradictory
};

struct SolveOptions {
  int budget = 64;
  bool frame_allowed = true; // when false, strategies keep firing until the
                             // left side is fully consumed (ensure checks)
};

// The core loop: cancellation of matching spatial atoms (instantiating right
// existentials by first-order matching), then highest-priority strategy
// application, repeated within the budget.
SolveResult solve(const SymbolicHeap& left, const SymbolicHeap& right,
                  const std::vector<Strategy>& strategies, const LogicEnv& env, FreshGen& fresh,
                  const SolveOptions& opts = {}, const SolverConfig& solver_cfg = {});

/// Renders a goal in the canonical printer format for --dump-entailments.
std::string print_goal(const EntailmentGoal& g);

} // namespace sepveri
