#pragma once

#include "sepveri/term.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sepveri {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

CmpOp cmp_negate(CmpOp op);
const char* cmp_str(CmpOp op);

enum class PureKind { Cmp, Not, And, Or, PredApp, BoolLit };

struct PureAtom;
using PurePtr = std::shared_ptr<const PureAtom>;

struct PureAtom {
  PureKind kind;
  CmpOp op = CmpOp::Eq;        // Cmp
  TermPtr lhs, rhs;            // Cmp
  std::vector<PurePtr> sub;    // Not (1), And/Or (n)
  std::string pred;            // PredApp
  std::vector<TermPtr> args;   // PredApp
  bool bval = true;            // BoolLit

  static PurePtr cmp(CmpOp op, TermPtr l, TermPtr r);
  static PurePtr eq(TermPtr l, TermPtr r) { return cmp(CmpOp::Eq, std::move(l), std::move(r)); }
  static PurePtr ne(TermPtr l, TermPtr r) { return cmp(CmpOp::Ne, std::move(l), std::move(r)); }
  static PurePtr negate(PurePtr p);
  static PurePtr conj(std::vector<PurePtr> ps);
  static PurePtr disj(std::vector<PurePtr> ps);
  static PurePtr pred_app(std::string name, std::vector<TermPtr> args);
  static PurePtr bool_lit(bool b);
};

int pure_cmp(const PurePtr& a, const PurePtr& b);
bool pure_eq(const PurePtr& a, const PurePtr& b);

enum class SpatialKind {
  Emp,
  PointsTo, // cell at loc holds value (value == Undef models has_permission)
  PredApp,  // user-defined spatial predicate
};

struct SpatialAtom {
  SpatialKind kind = SpatialKind::Emp;
  TermPtr loc;   // PointsTo
  TermPtr value; // PointsTo
  std::string pred;
  std::vector<TermPtr> args;

  static SpatialAtom emp();
  static SpatialAtom points_to(TermPtr loc, TermPtr value);
  static SpatialAtom has_permission(TermPtr loc);
  static SpatialAtom pred_app(std::string name, std::vector<TermPtr> args);

  bool is_permission() const;
};

int spatial_cmp(const SpatialAtom& a, const SpatialAtom& b);
bool spatial_eq(const SpatialAtom& a, const SpatialAtom& b);

struct BoundVar {
  std::string name;
  Sort sort = sort_unknown();
};

// One disjunct: (exists x̄, pure-conjunction && spatial-conjunction).
struct SymbolicHeap {
  std::vector<BoundVar> exists;
  std::vector<PurePtr> pure;
  std::vector<SpatialAtom> spatial;

  bool is_emp_only() const { return spatial.empty(); }
  void collect_vars(std::set<std::string>& logic_vars, std::set<std::string>& prog_vars) const;
  std::set<std::string> free_logic_vars() const;
};

bool heap_eq(const SymbolicHeap& a, const SymbolicHeap& b);

// A named disjunction of symbolic heaps. An empty branch list denotes False.
struct Branch {
  std::optional<std::string> name;
  SymbolicHeap heap;
};

struct Assertion {
  std::vector<Branch> branches;

  static Assertion single(SymbolicHeap h, std::optional<std::string> name = std::nullopt);
  bool is_false() const { return branches.empty(); }
  const Branch* find(const std::string& name) const;
};

struct PredParam {
  std::string name;
  Sort sort = sort_unknown();
};

struct PredicateDef {
  std::string name;
  std::vector<PredParam> params;
  Assertion body;
};

// Deterministic fresh-name source, one per verification task.
class FreshGen {
public:
  void reserve(const std::string& name) { used_.insert(name); }
  void reserve_all(const std::set<std::string>& names) { used_.insert(names.begin(), names.end()); }

  /// Returns `base` itself when unused, otherwise base0, base1, ...
  std::string fresh(const std::string& base);
  /// Capture-avoidance flavor: appends primes (y -> y') until free.
  std::string fresh_primed(const std::string& base);

private:
  std::set<std::string> used_;
};

/// Gathers every identifier used anywhere in the heap so FreshGen can avoid it.
std::set<std::string> all_names(const SymbolicHeap& h);
std::set<std::string> all_names(const Assertion& a);

using TermMap = std::map<std::string, TermPtr>; // logical-var name -> term

TermPtr subst_term(const TermPtr& t, const TermMap& m);
PurePtr subst_pure(const PurePtr& p, const TermMap& m);
SpatialAtom subst_spatial(const SpatialAtom& s, const TermMap& m);

/// Simultaneous capture-avoiding substitution of logical variables.
SymbolicHeap substitute(const SymbolicHeap& h, const TermMap& m, FreshGen* fresh = nullptr);
Assertion substitute(const Assertion& a, const TermMap& m, FreshGen* fresh = nullptr);

/// Replaces program-variable occurrences (used by assignment renaming and by
/// @pre substitution at call boundaries). Key is the variable name; at_pre
/// occurrences are only replaced when `include_at_pre` is set.
SymbolicHeap subst_prog_var(const SymbolicHeap& h, const std::string& var, const TermPtr& to,
                            bool include_at_pre = false);

} // namespace sepveri
