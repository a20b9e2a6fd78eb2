#pragma once

#include "sepveri/formula.hpp"

#include <string>

namespace sepveri {

// Canonical textual forms matching the annotation grammar. Stable across
// releases; VC files and golden tests depend on byte-level output.
std::string print_term(const TermPtr& t);
std::string print_pure(const PurePtr& p);
std::string print_spatial(const SpatialAtom& s);
std::string print_heap(const SymbolicHeap& h);
std::string print_assertion(const Assertion& a);

} // namespace sepveri
