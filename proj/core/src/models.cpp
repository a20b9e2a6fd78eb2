#include "sepveri/models.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace sepveri {

CValuePtr CValue::of_int(std::int64_t v) {
  CValue c;
  c.kind = Kind::Int;
  c.i = v;
  return std::make_shared<CValue>(std::move(c));
}

CValuePtr CValue::of_addr(CLoc l) {
  CValue c;
  c.kind = Kind::Addr;
  c.loc = std::move(l);
  return std::make_shared<CValue>(std::move(c));
}

CValuePtr CValue::null() { return of_addr(CLoc{0, ""}); }

CValuePtr CValue::of_ctor(std::string name, std::vector<CValuePtr> args) {
  CValue c;
  c.kind = Kind::Ctor;
  c.ctor = std::move(name);
  c.args = std::move(args);
  return std::make_shared<CValue>(std::move(c));
}

CValuePtr CValue::uninit() {
  CValue c;
  c.kind = Kind::Uninit;
  return std::make_shared<CValue>(std::move(c));
}

int cvalue_cmp(const CValuePtr& a, const CValuePtr& b) {
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case CValue::Kind::Int:
      if (a->i != b->i) return a->i < b->i ? -1 : 1;
      return 0;
    case CValue::Kind::Addr:
      if (!(a->loc == b->loc)) return a->loc < b->loc ? -1 : 1;
      return 0;
    case CValue::Kind::Uninit: return 0;
    case CValue::Kind::Ctor: {
      int c = a->ctor.compare(b->ctor);
      if (c != 0) return c < 0 ? -1 : 1;
      if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        c = cvalue_cmp(a->args[i], b->args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

bool cvalue_eq(const CValuePtr& a, const CValuePtr& b) { return cvalue_cmp(a, b) == 0; }

std::string cvalue_str(const CValuePtr& v) {
  switch (v->kind) {
    case CValue::Kind::Int: return std::to_string(v->i);
    case CValue::Kind::Addr: {
      if (v->loc.base == 0 && v->loc.field.empty()) return "NULL";
      std::ostringstream os;
      os << "a" << v->loc.base;
      if (!v->loc.field.empty()) os << "." << v->loc.field;
      return os.str();
    }
    case CValue::Kind::Uninit: return "<uninit>";
    case CValue::Kind::Ctor: {
      std::ostringstream os;
      os << v->ctor;
      if (!v->args.empty()) {
        os << "(";
        for (std::size_t i = 0; i < v->args.size(); ++i) {
          if (i) os << ", ";
          os << cvalue_str(v->args[i]);
        }
        os << ")";
      }
      return os.str();
    }
  }
  return "?";
}

int cheap_cmp(const CHeap& a, const CHeap& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return ia->first < ib->first ? -1 : 1;
    int c = cvalue_cmp(ia->second, ib->second);
    if (c != 0) return c;
  }
  if (ia != a.end()) return 1;
  if (ib != b.end()) return -1;
  return 0;
}

int model_cmp(const Model& a, const Model& b) {
  auto ia = a.store.begin(), ib = b.store.begin();
  for (; ia != a.store.end() && ib != b.store.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    int c = cvalue_cmp(ia->second, ib->second);
    if (c != 0) return c;
  }
  if (ia != a.store.end()) return 1;
  if (ib != b.store.end()) return -1;
  return cheap_cmp(a.heap, b.heap);
}

namespace {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<CValuePtr> enumerate_inductive(const SortDef& sd, const LogicEnv& env,
                                           const ModelBound& bound, int depth);

std::vector<CValuePtr> enumerate_sort_depth(const Sort& sort, const LogicEnv& env,
                                            const ModelBound& bound, int depth) {
  std::vector<CValuePtr> out;
  if (sort.name == "Z" || sort.name == "?") {
    for (std::int64_t v = bound.int_lo; v <= bound.int_hi; ++v) out.push_back(CValue::of_int(v));
    return out;
  }
  if (sort.name == "addr") {
    out.push_back(CValue::null());
    for (int a = 1; a <= bound.max_addr; ++a) out.push_back(CValue::of_addr(CLoc{a, ""}));
    return out;
  }
  const SortDef* sd = env.find_sort(sort.name);
  if (!sd) throw OracleError("oracle: unknown sort " + sort.name);
  if (!sd->is_inductive()) {
    // uninterpreted sorts get a small token domain
    for (int k = 0; k < 2; ++k)
      out.push_back(CValue::of_ctor("$" + sort.name + std::to_string(k), {}));
    return out;
  }
  return enumerate_inductive(*sd, env, bound, depth);
}

std::vector<CValuePtr> enumerate_inductive(const SortDef& sd, const LogicEnv& env,
                                           const ModelBound& bound, int depth) {
  std::vector<CValuePtr> out;
  for (const auto& ctor : sd.ctors) {
    bool recursive = false;
    for (const auto& s : ctor.arg_sorts)
      if (s.name == sd.name) recursive = true;
    if (recursive && depth <= 0) continue;
    // cross product of argument domains
    std::vector<std::vector<CValuePtr>> domains;
    for (const auto& s : ctor.arg_sorts)
      domains.push_back(enumerate_sort_depth(s, env, bound, s.name == sd.name ? depth - 1 : depth));
    std::vector<CValuePtr> current(domains.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == domains.size()) {
        out.push_back(CValue::of_ctor(ctor.name, current));
        return;
      }
      for (const auto& v : domains[i]) {
        current[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

bool match_value_pattern(const TermPtr& pat, const CValuePtr& val,
                         std::map<std::string, CValuePtr>& binding) {
  if (pat->kind == TermKind::LogicVar) {
    auto it = binding.find(pat->name);
    if (it != binding.end()) return cvalue_eq(it->second, val);
    binding[pat->name] = val;
    return true;
  }
  if (pat->kind == TermKind::IntLit)
    return val->kind == CValue::Kind::Int && val->i == pat->int_val;
  if (pat->kind == TermKind::App && pat->app_kind == AppKind::Ctor) {
    if (val->kind != CValue::Kind::Ctor || val->ctor != pat->name ||
        val->args.size() != pat->args.size())
      return false;
    for (std::size_t i = 0; i < pat->args.size(); ++i)
      if (!match_value_pattern(pat->args[i], val->args[i], binding)) return false;
    return true;
  }
  return false;
}

std::optional<CValuePtr> eval_term_impl(const TermPtr& t, const CStore& store,
                                        const LogicEnv& env, int fuel) {
  if (fuel <= 0) return std::nullopt;
  switch (t->kind) {
    case TermKind::IntLit: return CValue::of_int(t->int_val);
    case TermKind::Null: return CValue::null();
    case TermKind::Undef: return CValue::uninit();
    case TermKind::ProgVar: {
      auto it = store.find(t->at_pre ? t->name + "@pre" : t->name);
      if (it == store.end()) return std::nullopt;
      return it->second;
    }
    case TermKind::LogicVar: {
      auto it = store.find(t->name);
      if (it == store.end()) return std::nullopt;
      return it->second;
    }
    case TermKind::FieldAddr: {
      auto base = eval_term_impl(t->args[0], store, env, fuel - 1);
      if (!base || (*base)->kind != CValue::Kind::Addr) return std::nullopt;
      const CLoc& l = (*base)->loc;
      if (l.base == 0 || !l.field.empty()) return std::nullopt;
      return CValue::of_addr(CLoc{l.base, t->name});
    }
    case TermKind::Index: {
      auto base = eval_term_impl(t->args[0], store, env, fuel - 1);
      auto idx = eval_term_impl(t->args[1], store, env, fuel - 1);
      if (!base || !idx || (*base)->kind != CValue::Kind::Addr ||
          (*idx)->kind != CValue::Kind::Int)
        return std::nullopt;
      const CLoc& l = (*base)->loc;
      if (l.base == 0 || !l.field.empty()) return std::nullopt;
      return CValue::of_addr(CLoc{l.base, "@" + std::to_string((*idx)->i)});
    }
    case TermKind::App: {
      std::vector<CValuePtr> args;
      for (const auto& a : t->args) {
        auto v = eval_term_impl(a, store, env, fuel - 1);
        if (!v) return std::nullopt;
        args.push_back(*v);
      }
      if (t->app_kind == AppKind::Ctor) return CValue::of_ctor(t->name, args);
      if (t->app_kind == AppKind::Builtin) {
        if (t->name == "neg" && args.size() == 1 && args[0]->kind == CValue::Kind::Int)
          return CValue::of_int(-args[0]->i);
        if (args.size() == 2 && args[0]->kind == CValue::Kind::Int &&
            args[1]->kind == CValue::Kind::Int) {
          std::int64_t a = args[0]->i, b = args[1]->i;
          if (t->name == "+") return CValue::of_int(a + b);
          if (t->name == "-") return CValue::of_int(a - b);
          if (t->name == "*") return CValue::of_int(a * b);
          if (t->name == "/") return b == 0 ? std::nullopt : std::optional(CValue::of_int(a / b));
          if (t->name == "%") return b == 0 ? std::nullopt : std::optional(CValue::of_int(a % b));
          if (t->name == "&") return CValue::of_int(a & b);
          if (t->name == "|") return CValue::of_int(a | b);
          if (t->name == "^") return CValue::of_int(a ^ b);
          if (t->name == "<<") return (b < 0 || b > 62) ? std::nullopt
                                                        : std::optional(CValue::of_int(a << b));
          if (t->name == ">>") return (b < 0 || b > 62) ? std::nullopt
                                                        : std::optional(CValue::of_int(a >> b));
        }
        return std::nullopt;
      }
      // pure function with defining equations
      const PureFunDef* fd = env.find_fun(t->name);
      if (!fd || fd->equations.empty()) return std::nullopt;
      for (const auto& eq : fd->equations) {
        if (eq.patterns.size() != args.size()) continue;
        std::map<std::string, CValuePtr> binding;
        bool ok = true;
        for (std::size_t i = 0; i < args.size() && ok; ++i)
          ok = match_value_pattern(eq.patterns[i], args[i], binding);
        if (ok) return eval_term_impl(eq.rhs, binding, env, fuel - 1);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

} // namespace

std::vector<CValuePtr> enumerate_sort(const Sort& sort, const LogicEnv& env,
                                      const ModelBound& bound) {
  return enumerate_sort_depth(sort, env, bound, bound.ctor_depth);
}

std::optional<CValuePtr> eval_term(const TermPtr& t, const CStore& store, const LogicEnv& env) {
  return eval_term_impl(t, store, env, 100000);
}

std::optional<bool> eval_pure(const PurePtr& p, const CStore& store, const LogicEnv& env) {
  switch (p->kind) {
    case PureKind::BoolLit: return p->bval;
    case PureKind::Cmp: {
      auto l = eval_term(p->lhs, store, env);
      auto r = eval_term(p->rhs, store, env);
      if (!l || !r) return std::nullopt;
      if (p->op == CmpOp::Eq) return cvalue_eq(*l, *r);
      if (p->op == CmpOp::Ne) return !cvalue_eq(*l, *r);
      if ((*l)->kind != CValue::Kind::Int || (*r)->kind != CValue::Kind::Int) return std::nullopt;
      std::int64_t a = (*l)->i, b = (*r)->i;
      switch (p->op) {
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
        default: return std::nullopt;
      }
    }
    case PureKind::Not: {
      auto v = eval_pure(p->sub[0], store, env);
      if (!v) return std::nullopt;
      return !*v;
    }
    case PureKind::And: {
      for (const auto& s : p->sub) {
        auto v = eval_pure(s, store, env);
        if (!v) return std::nullopt;
        if (!*v) return false;
      }
      return true;
    }
    case PureKind::Or: {
      bool any_unknown = false;
      for (const auto& s : p->sub) {
        auto v = eval_pure(s, store, env);
        if (!v) any_unknown = true;
        else if (*v) return true;
      }
      if (any_unknown) return std::nullopt;
      return false;
    }
    case PureKind::PredApp: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// Disjoint merge; nullopt on overlap.
std::optional<CHeap> merge_heaps(const CHeap& a, const CHeap& b) {
  CHeap out = a;
  for (const auto& [l, v] : b) {
    if (out.count(l)) return std::nullopt;
    out.emplace(l, v);
  }
  return out;
}

class HeapEnum {
public:
  HeapEnum(const LogicEnv& env, const ModelBound& bound, long* budget)
      : env_(env), bound_(bound), budget_(budget) {}

  bool spend() {
    if (budget_ && --(*budget_) < 0) {
      truncated_ = true;
      return false;
    }
    return true;
  }

  bool truncated() const { return truncated_; }

  std::optional<CLoc> eval_loc(const TermPtr& loc, const CStore& store) {
    if (loc->kind == TermKind::FieldAddr || loc->kind == TermKind::Index) {
      auto v = eval_term(loc, store, env_);
      if (!v || (*v)->kind != CValue::Kind::Addr) return std::nullopt;
      return (*v)->loc;
    }
    auto v = eval_term(loc, store, env_);
    if (!v || (*v)->kind != CValue::Kind::Addr) return std::nullopt;
    const CLoc& l = (*v)->loc;
    if (l.base == 0) return std::nullopt; // cell at NULL never exists
    return l;
  }

  std::vector<CValuePtr> cell_domain() {
    std::vector<CValuePtr> out;
    for (std::int64_t v = bound_.int_lo; v <= bound_.int_hi; ++v)
      out.push_back(CValue::of_int(v));
    out.push_back(CValue::null());
    for (int a = 1; a <= bound_.max_addr; ++a) out.push_back(CValue::of_addr(CLoc{a, ""}));
    out.push_back(CValue::uninit());
    return out;
  }

  std::vector<CHeap> atom_models(const SpatialAtom& atom, const CStore& store, int depth) {
    std::vector<CHeap> out;
    if (!spend()) return out;
    switch (atom.kind) {
      case SpatialKind::Emp:
        out.push_back(CHeap{});
        return out;
      case SpatialKind::PointsTo: {
        auto loc = eval_loc(atom.loc, store);
        if (!loc) return out;
        if (atom.value->kind == TermKind::Undef) {
          for (const auto& w : cell_domain()) out.push_back(CHeap{{*loc, w}});
          return out;
        }
        auto v = eval_term(atom.value, store, env_);
        if (!v) throw OracleError("oracle: cannot evaluate cell value");
        if ((*v)->kind == CValue::Kind::Uninit) return out;
        out.push_back(CHeap{{*loc, *v}});
        return out;
      }
      case SpatialKind::PredApp: {
        if (depth < 0) return out;
        const PredicateDef* def = env_.find_pred(atom.pred);
        if (!def) throw OracleError("oracle: unknown predicate " + atom.pred);
        std::vector<CValuePtr> args;
        for (const auto& a : atom.args) {
          auto v = eval_term(a, store, env_);
          if (!v) throw OracleError("oracle: cannot evaluate predicate argument");
          args.push_back(*v);
        }
        for (const auto& branch : def->body.branches) {
          CStore body_store;
          for (std::size_t i = 0; i < def->params.size(); ++i)
            body_store[def->params[i].name] = args[i];
          enum_exists(branch.heap, body_store, 0, depth - 1, out);
        }
        return out;
      }
    }
    return out;
  }

  // Enumerates existentials [idx..) of h, then checks pure atoms and builds
  // spatial combinations into `out`.
  void enum_exists(const SymbolicHeap& h, CStore store, std::size_t idx, int depth,
                   std::vector<CHeap>& out) {
    if (truncated_) return;
    if (idx < h.exists.size()) {
      const auto& bv = h.exists[idx];
      for (const auto& v : enumerate_sort_depth(bv.sort, env_, bound_, bound_.ctor_depth)) {
        if (!spend()) return;
        store[bv.name] = v;
        enum_exists(h, store, idx + 1, depth, out);
      }
      return;
    }
    for (const auto& p : h.pure) {
      auto v = eval_pure(p, store, env_);
      if (!v) throw OracleError("oracle: cannot evaluate pure atom");
      if (!*v) return;
    }
    std::vector<CHeap> acc{CHeap{}};
    for (const auto& atom : h.spatial) {
      std::vector<CHeap> next;
      auto pieces = atom_models(atom, store, depth);
      for (const auto& base : acc)
        for (const auto& piece : pieces) {
          if (!spend()) return;
          auto merged = merge_heaps(base, piece);
          if (merged) next.push_back(std::move(*merged));
        }
      acc = std::move(next);
      if (acc.empty()) return;
    }
    out.insert(out.end(), acc.begin(), acc.end());
  }

private:
  const LogicEnv& env_;
  const ModelBound& bound_;
  long* budget_;
  bool truncated_ = false;
};

void dedupe_heaps(std::vector<CHeap>& hs) {
  std::sort(hs.begin(), hs.end(), [](const CHeap& a, const CHeap& b) { return cheap_cmp(a, b) < 0; });
  hs.erase(std::unique(hs.begin(), hs.end(),
                       [](const CHeap& a, const CHeap& b) { return cheap_cmp(a, b) == 0; }),
           hs.end());
}

void collect_sorted_vars(const TermPtr& t, bool loc_pos,
                         std::map<std::string, Sort>& out) {
  if (t->kind == TermKind::ProgVar || t->kind == TermKind::LogicVar) {
    std::string key = (t->kind == TermKind::ProgVar && t->at_pre) ? t->name + "@pre" : t->name;
    Sort s = t->sort;
    if (s.name == "?" && loc_pos) s = sort_addr();
    auto it = out.find(key);
    if (it == out.end()) out[key] = s;
    else if (it->second.name == "?" && s.name != "?") it->second = s;
    return;
  }
  bool base_loc = t->kind == TermKind::FieldAddr || t->kind == TermKind::Index;
  for (std::size_t i = 0; i < t->args.size(); ++i)
    collect_sorted_vars(t->args[i], base_loc && i == 0, out);
}

void collect_sorted_vars_pure(const PurePtr& p, std::map<std::string, Sort>& out) {
  if (p->kind == PureKind::Cmp) {
    collect_sorted_vars(p->lhs, false, out);
    collect_sorted_vars(p->rhs, false, out);
  }
  for (const auto& s : p->sub) collect_sorted_vars_pure(s, out);
  for (const auto& t : p->args) collect_sorted_vars(t, false, out);
}

} // namespace

std::vector<CHeap> heaps_of(const SymbolicHeap& h, const CStore& store, const LogicEnv& env,
                            const ModelBound& bound, long* budget) {
  long local = bound.node_budget;
  HeapEnum he(env, bound, budget ? budget : &local);
  std::vector<CHeap> out;
  he.enum_exists(h, store, 0, bound.depth, out);
  dedupe_heaps(out);
  return out;
}

std::vector<std::pair<std::string, Sort>> free_vars_sorted(const SymbolicHeap& h) {
  std::map<std::string, Sort> vars;
  for (const auto& p : h.pure) collect_sorted_vars_pure(p, vars);
  for (const auto& s : h.spatial) {
    if (s.kind == SpatialKind::PointsTo) {
      collect_sorted_vars(s.loc, true, vars);
      collect_sorted_vars(s.value, false, vars);
    }
    for (const auto& t : s.args) collect_sorted_vars(t, false, vars);
  }
  for (const auto& b : h.exists) vars.erase(b.name);
  std::vector<std::pair<std::string, Sort>> out(vars.begin(), vars.end());
  return out;
}

ModelSet bounded_models(const SymbolicHeap& h, const LogicEnv& env, const ModelBound& bound,
                        std::vector<std::pair<std::string, Sort>> vars) {
  Assertion a = Assertion::single(h);
  return bounded_models(a, env, bound, std::move(vars));
}

ModelSet bounded_models(const Assertion& a, const LogicEnv& env, const ModelBound& bound,
                        std::vector<std::pair<std::string, Sort>> vars) {
  if (vars.empty()) {
    std::map<std::string, Sort> merged;
    for (const auto& b : a.branches)
      for (const auto& [n, s] : free_vars_sorted(b.heap)) {
        auto it = merged.find(n);
        if (it == merged.end() || it->second.name == "?") merged[n] = s;
      }
    vars.assign(merged.begin(), merged.end());
  }
  ModelSet result;
  long budget = bound.node_budget;

  std::vector<std::vector<CValuePtr>> domains;
  for (const auto& [n, s] : vars) domains.push_back(enumerate_sort(s, env, bound));

  CStore store;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (budget < 0) {
      result.truncated = true;
      return;
    }
    if (i == vars.size()) {
      for (const auto& b : a.branches) {
        auto hs = heaps_of(b.heap, store, env, bound, &budget);
        for (auto& hp : hs) result.models.push_back(Model{store, std::move(hp)});
      }
      return;
    }
    for (const auto& v : domains[i]) {
      store[vars[i].first] = v;
      rec(i + 1);
      if (budget < 0) {
        result.truncated = true;
        return;
      }
    }
    store.erase(vars[i].first);
  };
  rec(0);
  if (budget < 0) result.truncated = true;

  std::sort(result.models.begin(), result.models.end(),
            [](const Model& a, const Model& b) { return model_cmp(a, b) < 0; });
  result.models.erase(std::unique(result.models.begin(), result.models.end(),
                                  [](const Model& a, const Model& b) {
                                    return model_cmp(a, b) == 0;
                                  }),
                      result.models.end());
  return result;
}

bool satisfies(const SymbolicHeap& h, const CStore& store, const CHeap& heap,
               const LogicEnv& env, const ModelBound& bound) {
  auto hs = heaps_of(h, store, env, bound);
  for (const auto& c : hs)
    if (cheap_cmp(c, heap) == 0) return true;
  return false;
}

bool satisfies_subheap(const SymbolicHeap& h, const CStore& store, const CHeap& heap,
                       const LogicEnv& env, const ModelBound& bound) {
  auto hs = heaps_of(h, store, env, bound);
  for (const auto& c : hs) {
    bool sub = true;
    for (const auto& [l, v] : c) {
      auto it = heap.find(l);
      if (it == heap.end() || !cvalue_eq(it->second, v)) {
        sub = false;
        break;
      }
    }
    if (sub) return true;
  }
  return false;
}

} // namespace sepveri
