#pragma once

#include "sepveri/formula.hpp"

#include <map>
#include <optional>

namespace sepveri {

using PredTable = std::map<std::string, PredicateDef>;

// Normal form: ground facts evaluated, constructor equalities decomposed,
// equalities propagated to class representatives, duplicate pure atoms and emp
// conjuncts dropped, bound variables kept distinct from free ones. Returns
// nullopt when the heap is contradictory (duplicate cells, t != t, clashes).
std::optional<SymbolicHeap> normalize(const SymbolicHeap& h);

/// Normalizes every branch and drops the contradictory ones.
Assertion normalize_assertion(const Assertion& a);

/// True when ground evaluation can decide the atom.
std::optional<bool> eval_pure_ground(const PurePtr& p);

// Replaces the `atom_index`-th spatial atom (a predicate application) by its
// definition, one branch per definitional disjunct, existentials freshened,
// each result normalized with contradictory branches dropped.
Assertion unfold(const SymbolicHeap& h, std::size_t atom_index, const PredTable& preds,
                 FreshGen& fresh);

} // namespace sepveri
