#pragma once

#include "sepveri/diag.hpp"
#include "sepveri/formula.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sepveri {

// ---------------------------------------------------------------------------
// C types (the supported subset: void, integer types, pointers, structs,
// enums, typedef names).

struct CType;
using CTypePtr = std::shared_ptr<const CType>;

struct CType {
  enum class Kind { Void, Int, Ptr, Struct, Enum, Named } kind = Kind::Int;
  std::string name;  // struct/enum tag or typedef name
  CTypePtr pointee;  // Ptr

  static CTypePtr void_type();
  static CTypePtr int_type();
  static CTypePtr ptr(CTypePtr to);
  static CTypePtr struct_type(std::string tag);
  static CTypePtr enum_type(std::string tag);
  static CTypePtr named(std::string alias);

  bool is_pointer() const { return kind == Kind::Ptr; }
};

std::string ctype_str(const CTypePtr& t);

// ---------------------------------------------------------------------------
// Expressions

struct CExpr;
using CExprPtr = std::shared_ptr<const CExpr>;

struct CExpr {
  enum class Kind {
    IntLit,
    Var,
    Unary,   // op: - ! ~ * & ++pre --pre
    Binary,  // arithmetic, comparison, logical, bitwise
    Postfix, // op: ++ --
    Call,
    Member,  // base.field or base->field (arrow flag)
    Index,
    Cond,    // a ? b : c
    Assign,  // op: = += -= *= /= %=
  } kind = Kind::IntLit;

  SourceLoc loc;
  std::int64_t int_val = 0;
  std::string name; // Var, Call callee, Member field, Unary/Binary/Assign op
  bool arrow = false;
  std::vector<CExprPtr> args; // operands / call arguments

  static CExprPtr make(Kind k, SourceLoc loc);
};

// ---------------------------------------------------------------------------
// Annotations (parsed, unresolved: terms may contain value-position derefs
// and unresolved applications)

struct WhereClause {
  // (spec) or (spec) $ branch entries, in source order
  std::vector<std::pair<std::string, std::optional<std::string>>> entries;
  SourceLoc loc;
};

struct InvEntryMap {
  std::string from; // incoming branch name, or "*" for all
  std::string to;   // invariant branch name
};

struct Annot {
  enum class Kind {
    AssertFull,
    AssertPartial,
    Inv,
    WhichImplies,
    BranchName,
    BranchJoin,
    BranchClear,
    BranchTransition,
    Destruct,
  } kind;
  SourceLoc loc;

  Assertion assertion;               // asserts, which-implies pre, Inv branches
  Assertion post;                    // which-implies post
  std::vector<std::string> filter;   // trailing `$ name, name` branch filter
  bool full = false;                 // Inv Assert
  std::vector<InvEntryMap> entry_map;

  // Branch name cases: (name, condition); the final case may be bare
  std::vector<std::pair<std::string, PurePtr>> name_cases;
  std::optional<std::string> rest_name;

  std::vector<std::string> join_sources;
  std::string target; // join target / transition target
  std::string source; // transition source
  std::string var;    // Destruct variable / BranchClear name
};

struct FuncSpecSyntax {
  std::optional<std::string> name;
  std::optional<std::string> base;
  std::vector<std::string> with_vars;
  Assertion require;
  Assertion ensure;
  SourceLoc loc;
};

// ---------------------------------------------------------------------------
// Statements

struct CStmt;
using CStmtPtr = std::shared_ptr<CStmt>;

struct SwitchCase {
  std::vector<std::int64_t> values; // labels stacked on this entry point
  bool is_default = false;
  std::vector<CStmtPtr> stmts; // statements until the next label
  SourceLoc loc;
};

struct CStmt {
  enum class Kind {
    Decl,
    Expr,
    If,
    While,
    DoWhile,
    For,
    Switch,
    Break,
    Continue,
    Return,
    Block,
    Annot, // standalone annotation command
    Empty,
  } kind = Kind::Empty;
  SourceLoc loc;

  // attached annotations appearing directly before this statement
  std::vector<Annot> annots;

  CTypePtr decl_type;
  std::string decl_name;
  CExprPtr expr;   // Expr/Return value, Decl initializer
  CExprPtr cond;   // If/While/DoWhile/For/Switch
  CStmtPtr then_branch, else_branch;
  CStmtPtr body;
  CStmtPtr init; // For
  CExprPtr step; // For
  std::vector<SwitchCase> cases;
  std::vector<CStmtPtr> items; // Block
  std::optional<WhereClause> where; // on call statements
};

// ---------------------------------------------------------------------------
// Declarations and the translation unit

struct StructField {
  std::string name;
  CTypePtr type;
  SourceLoc loc;
};

struct StructDef {
  std::string tag;
  std::vector<StructField> fields;
  SourceLoc loc;
};

struct EnumDef {
  std::string tag; // may be empty
  std::vector<std::pair<std::string, std::int64_t>> items;
  SourceLoc loc;
};

struct CParam {
  CTypePtr type;
  std::string name;
  SourceLoc loc;
};

struct CFunction {
  std::string name;
  CTypePtr ret;
  std::vector<CParam> params;
  std::vector<FuncSpecSyntax> specs; // gathered across declarations
  CStmtPtr body;                     // null for declarations
  SourceLoc loc;
};

struct AnnotatedProgram {
  std::vector<StructDef> structs;
  std::vector<EnumDef> enums;
  std::map<std::string, CTypePtr> typedefs;
  std::vector<CFunction> functions; // source order, one entry per name
  std::map<std::string, std::size_t> function_index;
};

// ---------------------------------------------------------------------------
// Lowered statement IR produced by the resolver: expressions are logical
// terms, heap reads are explicit Load steps, short-circuit operators with
// effectful operands are already split into branching.

struct XStmt;
using XStmtPtr = std::shared_ptr<const XStmt>;

struct XSwitchCase {
  std::vector<std::int64_t> values;
  bool is_default = false;
  std::size_t entry; // statement index in the flattened switch body
  SourceLoc loc;
};

struct ResolvedWhere {
  // branch name -> spec name; nullopt key = applies to all branches
  std::optional<std::string> default_spec;
  std::map<std::string, std::string> per_branch;
};

struct XStmt {
  enum class Kind {
    Decl,    // var [= rhs]
    Assign,  // var = rhs (pure term)
    Load,    // var = *loc
    Store,   // *loc = rhs
    Call,    // [var =] callee(args)
    If,
    Loop,    // while (cond) body [step executed before back edge]
    Switch,
    Break,
    Continue,
    Return,
    Block,
    Annot,
  } kind;
  SourceLoc loc;

  std::string var;
  Sort var_sort = sort_unknown();
  TermPtr rhs;
  TermPtr addr; // Load/Store location (address term)
  std::string callee;
  std::vector<TermPtr> args;
  ResolvedWhere where;

  PurePtr cond; // If/Loop
  std::vector<XStmtPtr> items;          // Block
  XStmtPtr then_branch, else_branch, body, step;
  TermPtr scrutinee;                    // Switch
  std::vector<XSwitchCase> cases;
  std::vector<XStmtPtr> switch_body;    // flattened statements
  std::optional<Annot> annot;           // resolved annotation (Annot kind, Loop inv)
  std::optional<TermPtr> ret;           // Return value
};

} // namespace sepveri
