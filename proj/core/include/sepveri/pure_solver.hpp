#pragma once

#include "sepveri/congruence.hpp"
#include "sepveri/decls.hpp"
#include "sepveri/fme.hpp"
#include "sepveri/formula.hpp"

#include <string>
#include <vector>

namespace sepveri {

// A pure proof obligation as the solver sees it: hypotheses and one goal.
struct PureVC {
  std::vector<PurePtr> hyps;
  PurePtr goal;
};

enum class ProveStatus { Proved, Unknown };

struct ProveResult {
  ProveStatus status = ProveStatus::Unknown;
  // Proved: discharge route ("congruence", "fme", "hyps-contradictory", ...).
  // Unknown: reason ("nonlinear", "incomplete", "blowup", "disjunctive-goal",
  // "existential-goal", ...).
  std::string reason;

  bool proved() const { return status == ProveStatus::Proved; }
};

struct SolverConfig {
  std::size_t fme_max_constraints = 4096;
};

// Sound, deliberately incomplete: congruence/rewriting with declared
// equations, else FME refutation of hyps && !goal after abstracting
// non-linear subterms as opaque columns.
ProveResult prove(const PureVC& vc, const LogicEnv& env, const SolverConfig& cfg = {});

/// Convenience wrapper building the VC in place.
ProveResult prove_atom(const std::vector<PurePtr>& hyps, const PurePtr& goal,
                       const LogicEnv& env, const SolverConfig& cfg = {});

} // namespace sepveri
