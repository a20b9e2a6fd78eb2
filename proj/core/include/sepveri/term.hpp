#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sepveri {

// Logical sorts. "Z" (mathematical integers backing C ints) and "addr"
// (pointer values) are built in; inductive and uninterpreted sorts come from
// the .logic declarations file.
struct Sort {
  std::string name;

  bool operator==(const Sort& o) const { return name == o.name; }
  bool operator!=(const Sort& o) const { return name != o.name; }
  bool operator<(const Sort& o) const { return name < o.name; }
};

inline Sort sort_int() { return {"Z"}; }
inline Sort sort_addr() { return {"addr"}; }
inline Sort sort_unknown() { return {"?"}; }

constexpr std::int64_t kIntMin = -2147483648LL;
constexpr std::int64_t kIntMax = 2147483647LL;

enum class TermKind {
  IntLit,     // integer literal (mathematical integer, 64-bit storage)
  Null,       // NULL pointer literal
  Undef,      // the distinguished uninitialized value (has_permission cells)
  ProgVar,    // program variable; at_pre marks the entry value x@pre
  LogicVar,   // logical variable
  FieldAddr,  // &(base->field): address of a struct field cell
  Index,      // &(base[index]): address of an array element cell
  App,        // pure function, constructor, or arithmetic operator application
};

enum class AppKind {
  Unresolved, // after parsing, before resolution
  PureFun,
  Ctor,
  Builtin, // arithmetic / bitwise operators: + - * / % & | ^ << >> neg
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
  TermKind kind;
  std::int64_t int_val = 0;      // IntLit
  std::string name;              // ProgVar/LogicVar name, App function, FieldAddr field
  bool at_pre = false;           // ProgVar
  Sort sort = sort_unknown();    // filled in by the resolver; "?" before that
  AppKind app_kind = AppKind::Unresolved;
  std::vector<TermPtr> args;     // App arguments; FieldAddr/Index base (+index)

  static TermPtr int_lit(std::int64_t v);
  static TermPtr null();
  static TermPtr undef();
  static TermPtr prog_var(std::string name, bool at_pre = false, Sort sort = sort_unknown());
  static TermPtr logic_var(std::string name, Sort sort = sort_unknown());
  static TermPtr field_addr(TermPtr base, std::string field, Sort value_sort = sort_unknown());
  static TermPtr index_addr(TermPtr base, TermPtr index, Sort value_sort = sort_unknown());
  static TermPtr app(std::string fn, std::vector<TermPtr> args, AppKind k = AppKind::Unresolved,
                     Sort sort = sort_unknown());

  bool is_var() const { return kind == TermKind::ProgVar || kind == TermKind::LogicVar; }
  bool is_literal() const {
    return kind == TermKind::IntLit || kind == TermKind::Null || kind == TermKind::Undef;
  }
  bool is_location() const {
    return kind == TermKind::FieldAddr || kind == TermKind::Index || is_var() ||
           kind == TermKind::Null;
  }
};

// Structural comparison; also the fixed total order used to pick equality-class
// representatives (literals < program vars < @pre vars < logical vars <
// compound terms, then lexicographic).
int term_cmp(const TermPtr& a, const TermPtr& b);
bool term_eq(const TermPtr& a, const TermPtr& b);

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_cmp(a, b) < 0; }
};

std::size_t term_hash(const TermPtr& t);

/// Collects free variable occurrences (terms of kind ProgVar/LogicVar).
void collect_vars(const TermPtr& t, std::set<std::string>& logic_vars,
                  std::set<std::string>& prog_vars);

/// Rebuilds `t` with every maximal subterm found in `m` replaced.
TermPtr replace_terms(const TermPtr& t, const std::map<TermPtr, TermPtr, TermLess>& m);

bool contains_var(const TermPtr& t, const std::string& logic_var);

} // namespace sepveri
