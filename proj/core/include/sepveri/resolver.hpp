#pragma once

#include "sepveri/cast.hpp"
#include "sepveri/decls.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sepveri {

// ---------------------------------------------------------------------------
// Shared formula resolution: classifies applications against the logic
// environment, checks arities, reroutes pure-predicate atoms, optionally
// elaborates value-position dereferences into fresh existentials with
// points-to atoms, and infers variable sorts.

struct FormulaScope {
  std::map<std::string, Sort> var_sorts;   // known variables (params, locals)
  std::map<std::string, Sort> field_sorts; // struct field value sorts (may grow)
  bool allow_patterns = false;             // "?x" variables (strategy files)
  bool allow_deref = false;                // value-position dereferences
  std::set<std::string> prog_vars;         // names to mark as program variables
};

void resolve_heap(SymbolicHeap& h, const LogicEnv& env, FormulaScope& scope,
                  const SourceLoc& loc);
void resolve_assertion(Assertion& a, const LogicEnv& env, FormulaScope& scope,
                       const SourceLoc& loc);
TermPtr resolve_term(const TermPtr& t, const LogicEnv& env, FormulaScope& scope,
                     const SourceLoc& loc);
PurePtr resolve_pure(const PurePtr& p, const LogicEnv& env, FormulaScope& scope,
                     const SourceLoc& loc);

// ---------------------------------------------------------------------------
// Resolved program

struct FuncSpec {
  std::string name; // "" for the unnamed spec
  std::optional<std::string> base;
  std::vector<std::pair<std::string, Sort>> with_vars;
  Assertion require;
  Assertion ensure;
  SourceLoc loc;
};

struct ResolvedParam {
  std::string name;
  CTypePtr ctype;
  Sort sort;
};

struct ResolvedFunction {
  std::string name;
  CTypePtr ret;
  Sort ret_sort;
  std::vector<ResolvedParam> params;
  std::vector<FuncSpec> specs;
  int root_spec = -1; // index into specs; -1 when the function has none
  XStmtPtr body;      // null for declarations
  SourceLoc loc;
};

struct ResolvedProgram {
  LogicEnv env;
  std::map<std::string, Sort> field_sorts;
  std::vector<ResolvedFunction> functions;
  std::map<std::string, std::size_t> function_index;
  DiagList diags;

  const ResolvedFunction* find(const std::string& name) const;
  const FuncSpec* find_spec(const std::string& fn, const std::string& spec) const;
};

// Resolves the parsed program against the logic declarations: name and arity
// checking, spec wiring (derivation links, root specs), statement lowering
// (loads/stores extracted, short-circuit evaluation made explicit), and sort
// inference. Structural errors land in `diags`.
ResolvedProgram resolve(const AnnotatedProgram& prog, LogicEnv env);

} // namespace sepveri
