#pragma once

#include "sepveri/decls.hpp"

#include <string>

namespace sepveri {

// Parses a .logic declarations file: sorts, pure functions with optional
// defining equations, and spatial predicate definitions.
//
//   sort intlist = nil | cons(Z, intlist);
//   func app(intlist, intlist) : intlist {
//     app(nil, m) => m;
//     app(cons(h, t), m) => cons(h, app(t, m));
//   }
//   predicate listrep(x: addr) :=
//     x == NULL && emp
//     || exists v y, x != NULL && x -> next == y && x -> data == v && listrep(y);
//
// The result is fully resolved: applications are classified, arities checked,
// and variable sorts inferred.
LogicEnv parse_logic(const std::string& text, const std::string& filename);

} // namespace sepveri
