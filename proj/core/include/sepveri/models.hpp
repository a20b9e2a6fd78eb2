#pragma once

#include "sepveri/decls.hpp"
#include "sepveri/formula.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace sepveri {

// Concrete semantics used as the test oracle. Addresses are small positive
// integers; a concrete location is (base address, field name) with "" for
// plain cells; NULL is (0, "").

struct CLoc {
  int base = 0;
  std::string field;

  bool operator<(const CLoc& o) const {
    if (base != o.base) return base < o.base;
    return field < o.field;
  }
  bool operator==(const CLoc& o) const { return base == o.base && field == o.field; }
};

struct CValue;
using CValuePtr = std::shared_ptr<const CValue>;

struct CValue {
  enum class Kind { Int, Addr, Ctor, Uninit } kind = Kind::Int;
  std::int64_t i = 0;                 // Int
  CLoc loc;                           // Addr
  std::string ctor;                   // Ctor
  std::vector<CValuePtr> args;        // Ctor

  static CValuePtr of_int(std::int64_t v);
  static CValuePtr of_addr(CLoc l);
  static CValuePtr null();
  static CValuePtr of_ctor(std::string name, std::vector<CValuePtr> args);
  static CValuePtr uninit();
};

int cvalue_cmp(const CValuePtr& a, const CValuePtr& b);
bool cvalue_eq(const CValuePtr& a, const CValuePtr& b);
std::string cvalue_str(const CValuePtr& v);

using CHeap = std::map<CLoc, CValuePtr>;
using CStore = std::map<std::string, CValuePtr>; // "x", "x@pre", logical names

int cheap_cmp(const CHeap& a, const CHeap& b);

struct Model {
  CStore store;
  CHeap heap;
};

int model_cmp(const Model& a, const Model& b);

struct ModelBound {
  int max_addr = 3;          // plain addresses 1..max_addr (0 is NULL)
  std::int64_t int_lo = 0;   // integer enumeration range
  std::int64_t int_hi = 1;
  int depth = 4;             // recursive predicate descent budget
  int ctor_depth = 3;        // inductive-value enumeration depth
  long node_budget = 2000000; // soft enumeration cap
};

struct ModelSet {
  std::vector<Model> models; // sorted, deduplicated
  bool truncated = false;    // budget ran out; the set is partial
};

/// All values of `sort` within the bound, in deterministic order.
std::vector<CValuePtr> enumerate_sort(const Sort& sort, const LogicEnv& env,
                                      const ModelBound& bound);

/// Evaluates a ground-under-store term; nullopt when an uninterpreted
/// function blocks evaluation.
std::optional<CValuePtr> eval_term(const TermPtr& t, const CStore& store, const LogicEnv& env);
std::optional<bool> eval_pure(const PurePtr& p, const CStore& store, const LogicEnv& env);

/// All concrete heaps satisfying the spatial+pure part of `h` under `store`
/// (existentials enumerated), with predicate recursion truncated at
/// bound.depth as a least fixed point.
std::vector<CHeap> heaps_of(const SymbolicHeap& h, const CStore& store, const LogicEnv& env,
                            const ModelBound& bound, long* budget = nullptr);

/// Free variables of `h` with their sorts (sort defaults to Z when unknown).
std::vector<std::pair<std::string, Sort>> free_vars_sorted(const SymbolicHeap& h);

// Enumerates all models within the bound. `vars` fixes the store domain (so
// two heaps can be compared over a common variable set); when empty, the
// heap's own free variables are used.
ModelSet bounded_models(const SymbolicHeap& h, const LogicEnv& env, const ModelBound& bound,
                        std::vector<std::pair<std::string, Sort>> vars = {});
ModelSet bounded_models(const Assertion& a, const LogicEnv& env, const ModelBound& bound,
                        std::vector<std::pair<std::string, Sort>> vars = {});

bool satisfies(const SymbolicHeap& h, const CStore& store, const CHeap& heap,
               const LogicEnv& env, const ModelBound& bound);

/// True when some subheap of `heap` satisfies `h` under `store`.
bool satisfies_subheap(const SymbolicHeap& h, const CStore& store, const CHeap& heap,
                       const LogicEnv& env, const ModelBound& bound);

} // namespace sepveri
