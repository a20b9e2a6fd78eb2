#include "sepveri/resolver.hpp"

#include "sepveri/normalize.hpp"
#include "sepveri/printer.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace sepveri {

// ---------------------------------------------------------------------------
// Shared formula resolution

namespace {

bool is_pattern_var(const TermPtr& t) {
  return t->kind == TermKind::LogicVar && !t->name.empty() && t->name[0] == '?';
}

struct SortAssign {
  std::map<std::string, Sort>& vars;
  std::map<std::string, Sort>& fields;
  bool changed = false;

  std::string key(const TermPtr& t) const {
    return t->kind == TermKind::ProgVar && t->at_pre ? t->name + "@pre" : t->name;
  }

  Sort var_sort(const TermPtr& t) const {
    auto it = vars.find(key(t));
    return it == vars.end() ? sort_unknown() : it->second;
  }

  void hint_var(const TermPtr& t, const Sort& s, const SourceLoc& loc) {
    if (s.name == "?" || !t->is_var()) return;
    auto it = vars.find(key(t));
    if (it == vars.end() || it->second.name == "?") {
      vars[key(t)] = s;
      changed = true;
    } else if (it->second != s) {
      throw ParseError(DiagCode::SortMismatch, loc,
                       "variable '" + key(t) + "' used both as " + it->second.name + " and " +
                           s.name);
    }
  }

  void hint_field(const std::string& f, const Sort& s) {
    if (s.name == "?") return;
    auto it = fields.find(f);
    if (it == fields.end() || it->second.name == "?") {
      fields[f] = s;
      changed = true;
    }
  }
};

} // namespace

TermPtr resolve_term(const TermPtr& t, const LogicEnv& env, FormulaScope& scope,
                     const SourceLoc& loc) {
  switch (t->kind) {
    case TermKind::LogicVar: {
      if (is_pattern_var(t)) {
        if (!scope.allow_patterns)
          throw ParseError(DiagCode::SyntaxError, loc, "pattern variable outside strategy file");
        return t;
      }
      if (scope.prog_vars.count(t->name)) {
        auto it = scope.var_sorts.find(t->name);
        return Term::prog_var(t->name, false,
                              it == scope.var_sorts.end() ? sort_unknown() : it->second);
      }
      const CtorDef* ctor = nullptr;
      if (const SortDef* sd = env.sort_of_ctor(t->name, &ctor); sd && ctor->arg_sorts.empty())
        return Term::app(t->name, {}, AppKind::Ctor, Sort{sd->name});
      return t;
    }
    case TermKind::ProgVar: {
      if (!t->at_pre || scope.prog_vars.count(t->name)) return t;
      throw ParseError(DiagCode::UnknownVariable, loc,
                       "'" + t->name + "@pre' does not name a parameter");
    }
    case TermKind::FieldAddr: {
      Term copy = *t;
      copy.args = {resolve_term(t->args[0], env, scope, loc)};
      return std::make_shared<Term>(std::move(copy));
    }
    case TermKind::Index: {
      Term copy = *t;
      copy.args = {resolve_term(t->args[0], env, scope, loc),
                   resolve_term(t->args[1], env, scope, loc)};
      return std::make_shared<Term>(std::move(copy));
    }
    case TermKind::App: {
      std::vector<TermPtr> args;
      for (const auto& a : t->args) args.push_back(resolve_term(a, env, scope, loc));
      if (t->app_kind == AppKind::Builtin) {
        Term copy = *t;
        copy.args = std::move(args);
        return std::make_shared<Term>(std::move(copy));
      }
      if (t->name == "*" && args.size() == 1) {
        Term copy = *t;
        copy.args = std::move(args);
        return std::make_shared<Term>(std::move(copy)); // deref, elaborated later
      }
      if (t->name == "&" && args.size() == 1) {
        if (args[0]->kind != TermKind::FieldAddr && args[0]->kind != TermKind::Index)
          throw ParseError(DiagCode::UnsupportedFeature, loc,
                           "address-of is only supported on field and element cells");
        return args[0];
      }
      const CtorDef* ctor = nullptr;
      if (const SortDef* sd = env.sort_of_ctor(t->name, &ctor)) {
        if (ctor->arg_sorts.size() != args.size())
          throw ParseError(DiagCode::ArityMismatch, loc,
                           "constructor '" + t->name + "' expects " +
                               std::to_string(ctor->arg_sorts.size()) + " arguments");
        return Term::app(t->name, std::move(args), AppKind::Ctor, Sort{sd->name});
      }
      if (const PureFunDef* fd = env.find_fun(t->name)) {
        if (fd->arg_sorts.size() != args.size())
          throw ParseError(DiagCode::ArityMismatch, loc,
                           "function '" + t->name + "' expects " +
                               std::to_string(fd->arg_sorts.size()) + " arguments");
        return Term::app(t->name, std::move(args), AppKind::PureFun, fd->result);
      }
      if (env.find_pred(t->name))
        throw ParseError(DiagCode::SortMismatch, loc,
                         "spatial predicate '" + t->name + "' used in term position");
      throw ParseError(DiagCode::UnknownFunction, loc,
                       "unknown function or constructor '" + t->name + "'");
    }
    default:
      return t;
  }
}

namespace {

PurePtr resolve_pure_impl(const PurePtr& p, const LogicEnv& env, FormulaScope& scope,
                          const SourceLoc& loc) {
  if (p->kind == PureKind::PredApp)
    throw ParseError(DiagCode::UnknownPredicate, loc,
                     "'" + p->pred + "' is not a known pure formula");
  PureAtom copy = *p;
  if (p->kind == PureKind::Cmp) {
    copy.lhs = resolve_term(p->lhs, env, scope, loc);
    copy.rhs = resolve_term(p->rhs, env, scope, loc);
  }
  for (auto& s : copy.sub) s = resolve_pure_impl(s, env, scope, loc);
  return std::make_shared<PureAtom>(std::move(copy));
}

bool term_has_deref(const TermPtr& t) {
  if (t->kind == TermKind::FieldAddr || t->kind == TermKind::Index) return true;
  if (t->kind == TermKind::App && t->name == "*" && t->args.size() == 1) return true;
  for (const auto& a : t->args)
    if (term_has_deref(a)) return true;
  return false;
}

// Value-position dereference elaboration: x -> f (and *p, a[i]) outside a
// points-to location reads a cell, so it becomes a fresh existential bound by
// a points-to atom for that location.
class DerefElaborator {
public:
  explicit DerefElaborator(FreshGen& fresh) : fresh_(fresh) {}

  TermPtr value_position(const TermPtr& t) {
    if (t->kind == TermKind::FieldAddr || t->kind == TermKind::Index)
      return read_cell(address_position(t));
    if (t->kind == TermKind::App && t->name == "*" && t->args.size() == 1)
      return read_cell(value_position(t->args[0]));
    if (t->args.empty()) return t;
    Term copy = *t;
    for (auto& a : copy.args) a = value_position(a);
    return std::make_shared<Term>(std::move(copy));
  }

  TermPtr address_position(const TermPtr& t) {
    if (t->kind == TermKind::FieldAddr) {
      Term copy = *t;
      copy.args = {value_position(t->args[0])};
      return std::make_shared<Term>(std::move(copy));
    }
    if (t->kind == TermKind::Index) {
      Term copy = *t;
      copy.args = {value_position(t->args[0]), value_position(t->args[1])};
      return std::make_shared<Term>(std::move(copy));
    }
    if (t->kind == TermKind::App && t->name == "*" && t->args.size() == 1)
      return value_position(t->args[0]);
    return value_position(t);
  }

  std::vector<SpatialAtom> new_atoms;
  std::vector<BoundVar> new_exists;

private:
  TermPtr read_cell(const TermPtr& loc) {
    std::string key = print_term(loc);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::string name = fresh_.fresh("w");
    TermPtr v = Term::logic_var(name);
    new_exists.push_back(BoundVar{name, sort_unknown()});
    new_atoms.push_back(SpatialAtom::points_to(loc, v));
    cache_[key] = v;
    return v;
  }

  FreshGen& fresh_;
  std::map<std::string, TermPtr> cache_;
};

void infer_sorts_term(const TermPtr& t, SortAssign& sa, const Sort& expected,
                      const LogicEnv& env, const SourceLoc& loc) {
  if (t->is_var()) {
    sa.hint_var(t, expected, loc);
    return;
  }
  switch (t->kind) {
    case TermKind::FieldAddr:
      infer_sorts_term(t->args[0], sa, sort_addr(), env, loc);
      return;
    case TermKind::Index:
      infer_sorts_term(t->args[0], sa, sort_addr(), env, loc);
      infer_sorts_term(t->args[1], sa, sort_int(), env, loc);
      return;
    case TermKind::App: {
      if (t->app_kind == AppKind::Builtin) {
        for (const auto& a : t->args) infer_sorts_term(a, sa, sort_int(), env, loc);
        return;
      }
      if (t->app_kind == AppKind::Ctor) {
        const CtorDef* ctor = nullptr;
        env.sort_of_ctor(t->name, &ctor);
        for (std::size_t i = 0; i < t->args.size(); ++i)
          infer_sorts_term(t->args[i], sa, ctor ? ctor->arg_sorts[i] : sort_unknown(), env, loc);
        return;
      }
      if (t->app_kind == AppKind::PureFun) {
        const PureFunDef* fd = env.find_fun(t->name);
        for (std::size_t i = 0; i < t->args.size(); ++i)
          infer_sorts_term(t->args[i], sa, fd ? fd->arg_sorts[i] : sort_unknown(), env, loc);
        return;
      }
      for (const auto& a : t->args) infer_sorts_term(a, sa, sort_unknown(), env, loc);
      return;
    }
    default:
      return;
  }
}

Sort term_sort_of(const TermPtr& t, const SortAssign& sa) {
  if (t->is_var()) return sa.var_sort(t);
  switch (t->kind) {
    case TermKind::IntLit: return sort_int();
    case TermKind::Null: return sort_addr();
    case TermKind::FieldAddr: {
      auto it = sa.fields.find(t->name);
      return it == sa.fields.end() ? sort_unknown() : it->second;
    }
    case TermKind::App:
      if (t->app_kind == AppKind::Builtin) return sort_int();
      return t->sort;
    default:
      return sort_unknown();
  }
}

void infer_sorts_pure(const PurePtr& p, SortAssign& sa, const LogicEnv& env,
                      const SourceLoc& loc) {
  if (p->kind == PureKind::Cmp) {
    if (p->op == CmpOp::Lt || p->op == CmpOp::Le || p->op == CmpOp::Gt || p->op == CmpOp::Ge) {
      infer_sorts_term(p->lhs, sa, sort_int(), env, loc);
      infer_sorts_term(p->rhs, sa, sort_int(), env, loc);
    } else {
      infer_sorts_term(p->lhs, sa, term_sort_of(p->rhs, sa), env, loc);
      infer_sorts_term(p->rhs, sa, term_sort_of(p->lhs, sa), env, loc);
    }
  }
  for (const auto& s : p->sub) infer_sorts_pure(s, sa, env, loc);
}

TermPtr apply_sorts(const TermPtr& t, const SortAssign& sa) {
  if (t->is_var()) {
    Sort s = sa.var_sort(t);
    if (s.name != "?" && t->sort != s) {
      Term copy = *t;
      copy.sort = s;
      return std::make_shared<Term>(std::move(copy));
    }
    return t;
  }
  if (t->args.empty()) return t;
  Term copy = *t;
  for (auto& a : copy.args) a = apply_sorts(a, sa);
  if (t->kind == TermKind::FieldAddr) {
    auto it = sa.fields.find(t->name);
    if (it != sa.fields.end()) copy.sort = it->second;
  }
  return std::make_shared<Term>(std::move(copy));
}

PurePtr apply_sorts_pure(const PurePtr& p, const SortAssign& sa) {
  PureAtom copy = *p;
  if (p->kind == PureKind::Cmp) {
    copy.lhs = apply_sorts(p->lhs, sa);
    copy.rhs = apply_sorts(p->rhs, sa);
  }
  for (auto& s : copy.sub) s = apply_sorts_pure(s, sa);
  for (auto& t : copy.args) t = apply_sorts(t, sa);
  return std::make_shared<PureAtom>(std::move(copy));
}

} // namespace

PurePtr resolve_pure(const PurePtr& p, const LogicEnv& env, FormulaScope& scope,
                     const SourceLoc& loc) {
  PurePtr r = resolve_pure_impl(p, env, scope, loc);
  SortAssign sa{scope.var_sorts, scope.field_sorts};
  for (int i = 0; i < 3; ++i) {
    sa.changed = false;
    infer_sorts_pure(r, sa, env, loc);
    if (!sa.changed) break;
  }
  return apply_sorts_pure(r, sa);
}

void resolve_heap(SymbolicHeap& h, const LogicEnv& env, FormulaScope& scope,
                  const SourceLoc& loc) {
  for (const auto& b : h.exists)
    if (scope.prog_vars.count(b.name))
      throw ParseError(DiagCode::NameOverlap, loc,
                       "bound variable '" + b.name + "' shadows a program variable");

  // 1. classify applications and program variables
  for (auto& p : h.pure) p = resolve_pure_impl(p, env, scope, loc);
  for (auto& s : h.spatial) {
    if (s.kind == SpatialKind::PredApp) {
      const PredicateDef* def = env.find_pred(s.pred);
      if (!def)
        throw ParseError(DiagCode::UnknownPredicate, loc, "unknown predicate '" + s.pred + "'");
      if (def->params.size() != s.args.size())
        throw ParseError(DiagCode::ArityMismatch, loc,
                         "predicate '" + s.pred + "' expects " +
                             std::to_string(def->params.size()) + " arguments");
      for (auto& a : s.args) a = resolve_term(a, env, scope, loc);
    } else if (s.kind == SpatialKind::PointsTo) {
      s.loc = resolve_term(s.loc, env, scope, loc);
      s.value = resolve_term(s.value, env, scope, loc);
    }
  }

  // 2. elaborate value-position dereferences
  bool has_deref = false;
  for (const auto& p : h.pure) {
    std::function<void(const PurePtr&)> walk = [&](const PurePtr& q) {
      if (q->kind == PureKind::Cmp)
        has_deref = has_deref || term_has_deref(q->lhs) || term_has_deref(q->rhs);
      for (const auto& s : q->sub) walk(s);
    };
    walk(p);
  }
  for (const auto& s : h.spatial) {
    if (s.kind == SpatialKind::PointsTo) {
      if (s.loc->kind == TermKind::FieldAddr) {
        has_deref = has_deref || term_has_deref(s.loc->args[0]);
      } else if (s.loc->kind == TermKind::Index) {
        has_deref =
            has_deref || term_has_deref(s.loc->args[0]) || term_has_deref(s.loc->args[1]);
      } else {
        has_deref = has_deref || term_has_deref(s.loc);
      }
      has_deref = has_deref || term_has_deref(s.value);
    }
    for (const auto& a : s.args) has_deref = has_deref || term_has_deref(a);
  }
  if (has_deref) {
    if (!scope.allow_deref)
      throw ParseError(DiagCode::UnsupportedFeature, loc,
                       "value-position dereference is not allowed here");
    FreshGen fresh;
    fresh.reserve_all(all_names(h));
    for (const auto& [n, _] : scope.var_sorts) fresh.reserve(n);
    for (const auto& n : scope.prog_vars) fresh.reserve(n);
    DerefElaborator el(fresh);
    for (auto& p : h.pure) {
      std::function<PurePtr(const PurePtr&)> walk = [&](const PurePtr& q) -> PurePtr {
        PureAtom copy = *q;
        if (q->kind == PureKind::Cmp) {
          copy.lhs = el.value_position(q->lhs);
          copy.rhs = el.value_position(q->rhs);
        }
        for (auto& s : copy.sub) s = walk(s);
        return std::make_shared<PureAtom>(std::move(copy));
      };
      p = walk(p);
    }
    std::vector<SpatialAtom> elaborated;
    for (auto& s : h.spatial) {
      SpatialAtom copy = s;
      if (s.kind == SpatialKind::PointsTo) {
        copy.loc = el.address_position(s.loc);
        if (copy.value->kind != TermKind::Undef) copy.value = el.value_position(s.value);
      }
      for (auto& a : copy.args) a = el.value_position(a);
      elaborated.push_back(std::move(copy));
    }
    h.spatial.clear();
    h.spatial.insert(h.spatial.end(), el.new_atoms.begin(), el.new_atoms.end());
    h.spatial.insert(h.spatial.end(), elaborated.begin(), elaborated.end());
    h.exists.insert(h.exists.end(), el.new_exists.begin(), el.new_exists.end());
  }

  // 3. sort inference to fixpoint, then rewrite terms with the result
  SortAssign sa{scope.var_sorts, scope.field_sorts};
  for (int pass = 0; pass < 4; ++pass) {
    sa.changed = false;
    for (const auto& p : h.pure) infer_sorts_pure(p, sa, env, loc);
    for (const auto& s : h.spatial) {
      if (s.kind == SpatialKind::PointsTo) {
        const TermPtr& l = s.loc;
        if (l->kind == TermKind::FieldAddr) {
          infer_sorts_term(l, sa, sort_unknown(), env, loc);
          Sort vs = term_sort_of(s.value, sa);
          if (vs.name != "?") sa.hint_field(l->name, vs);
          auto it = sa.fields.find(l->name);
          if (it != sa.fields.end()) infer_sorts_term(s.value, sa, it->second, env, loc);
          else infer_sorts_term(s.value, sa, sort_unknown(), env, loc);
        } else if (l->kind == TermKind::Index) {
          infer_sorts_term(l, sa, sort_unknown(), env, loc);
          infer_sorts_term(s.value, sa, sort_unknown(), env, loc);
        } else {
          sa.hint_var(l, sort_addr(), loc);
          infer_sorts_term(s.value, sa, sort_unknown(), env, loc);
        }
      } else if (s.kind == SpatialKind::PredApp) {
        const PredicateDef* def = env.find_pred(s.pred);
        for (std::size_t i = 0; i < s.args.size(); ++i)
          infer_sorts_term(s.args[i], sa, def->params[i].sort, env, loc);
      }
    }
    if (!sa.changed) break;
  }
  for (auto& b : h.exists) {
    auto it = scope.var_sorts.find(b.name);
    b.sort = (it != scope.var_sorts.end() && it->second.name != "?") ? it->second : sort_int();
    scope.var_sorts[b.name] = b.sort;
  }
  for (auto& p : h.pure) p = apply_sorts_pure(p, sa);
  for (auto& s : h.spatial) {
    if (s.kind == SpatialKind::PointsTo) {
      s.loc = apply_sorts(s.loc, sa);
      s.value = apply_sorts(s.value, sa);
    }
    for (auto& a : s.args) a = apply_sorts(a, sa);
  }
}

void resolve_assertion(Assertion& a, const LogicEnv& env, FormulaScope& scope,
                       const SourceLoc& loc) {
  std::set<std::string> names;
  for (auto& b : a.branches) {
    if (b.name && !names.insert(*b.name).second)
      throw ParseError(DiagCode::NameOverlap, loc, "duplicate branch name '" + *b.name + "'");
    FormulaScope branch_scope = scope;
    resolve_heap(b.heap, env, branch_scope, loc);
    scope.field_sorts = branch_scope.field_sorts; // fields are global knowledge
    std::set<std::string> bound;
    for (const auto& bv : b.heap.exists) bound.insert(bv.name);
    for (const auto& [v, srt] : branch_scope.var_sorts)
      if (!bound.count(v) && srt.name != "?") scope.var_sorts[v] = srt;
  }
}

const ResolvedFunction* ResolvedProgram::find(const std::string& name) const {
  auto it = function_index.find(name);
  return it == function_index.end() ? nullptr : &functions[it->second];
}

const FuncSpec* ResolvedProgram::find_spec(const std::string& fn, const std::string& spec) const {
  const ResolvedFunction* f = find(fn);
  if (!f) return nullptr;
  for (const auto& s : f->specs)
    if (s.name == spec) return &s;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Program resolution and statement lowering

namespace {

Sort sort_of_ctype(const CTypePtr& t) {
  if (!t) return sort_unknown();
  switch (t->kind) {
    case CType::Kind::Int:
    case CType::Kind::Enum:
      return sort_int();
    case CType::Kind::Ptr: return sort_addr();
    default: return sort_unknown();
  }
}

class Lowerer {
public:
  Lowerer(ResolvedProgram& out, const AnnotatedProgram& prog, ResolvedFunction& fn)
      : out_(out), prog_(prog), fn_(fn) {
    for (const auto& p : fn.params) {
      scope_types_[p.name] = p.ctype;
      rename_[p.name] = p.name;
    }
  }

  XStmtPtr run(const CStmt& body) {
    auto block = lower_block(body);
    return block;
  }

private:
  [[noreturn]] void err(DiagCode code, const SourceLoc& loc, const std::string& msg) {
    throw ParseError(code, loc, msg);
  }

  XStmtPtr make(XStmt::Kind k, SourceLoc loc) {
    auto s = std::make_shared<XStmt>();
    s->kind = k;
    s->loc = std::move(loc);
    return s;
  }

  XStmt& mut(const XStmtPtr& p) { return const_cast<XStmt&>(*p); }

  CTypePtr canon_type(CTypePtr t) {
    while (t && t->kind == CType::Kind::Named) {
      auto it = prog_.typedefs.find(t->name);
      if (it == prog_.typedefs.end()) break;
      t = it->second;
    }
    return t;
  }

  const StructDef* struct_of(const CTypePtr& t) {
    CTypePtr c = canon_type(t);
    if (!c || c->kind != CType::Kind::Struct) return nullptr;
    for (const auto& s : prog_.structs)
      if (s.tag == c->name) return &s;
    return nullptr;
  }

  CTypePtr field_type(const CTypePtr& base_ptr, const std::string& field, const SourceLoc& loc) {
    CTypePtr c = canon_type(base_ptr);
    if (!c || c->kind != CType::Kind::Ptr)
      err(DiagCode::SortMismatch, loc, "'->' applied to a non-pointer");
    const StructDef* sd = struct_of(c->pointee);
    if (!sd) err(DiagCode::UnknownField, loc, "dereferenced type is not a known struct");
    for (const auto& f : sd->fields)
      if (f.name == field) return f.type;
    err(DiagCode::UnknownField, loc, "struct " + sd->tag + " has no field '" + field + "'");
  }

  std::string lookup(const std::string& name, const SourceLoc& loc) {
    auto it = rename_.find(name);
    if (it == rename_.end())
      err(DiagCode::UnknownVariable, loc, "use of undeclared variable '" + name + "'");
    return it->second;
  }

  CTypePtr type_of_var(const std::string& renamed) {
    auto it = scope_types_.find(renamed);
    return it == scope_types_.end() ? nullptr : it->second;
  }

  std::string declare(const std::string& name, const CTypePtr& type) {
    std::string unique = name;
    int k = 1;
    while (scope_types_.count(unique)) unique = name + "$" + std::to_string(k++);
    scope_types_[unique] = type;
    rename_[name] = unique;
    return unique;
  }

  std::string fresh_temp(const CTypePtr& type) {
    std::string name = "t$" + std::to_string(temp_counter_++);
    scope_types_[name] = type;
    return name;
  }

  TermPtr var_term(const std::string& renamed) {
    return Term::prog_var(renamed, false, sort_of_ctype(canon_type(type_of_var(renamed))));
  }

  bool effectful(const CExprPtr& e) {
    switch (e->kind) {
      case CExpr::Kind::Member:
      case CExpr::Kind::Index:
      case CExpr::Kind::Call:
      case CExpr::Kind::Assign:
      case CExpr::Kind::Postfix:
      case CExpr::Kind::Cond:
        return true;
      case CExpr::Kind::Unary:
        if (e->name == "*" || e->name == "++" || e->name == "--") return true;
        return effectful(e->args[0]);
      default:
        for (const auto& a : e->args)
          if (effectful(a)) return true;
        return false;
    }
  }

  // -- expression lowering: returns a pure term; loads and calls become
  //    statements appended to `pre` --

  struct LValue {
    bool is_var = false;
    std::string var;  // renamed
    TermPtr addr;     // when !is_var
    CTypePtr type;
  };

  LValue lower_lvalue(const CExprPtr& e, std::vector<XStmtPtr>& pre) {
    LValue lv;
    switch (e->kind) {
      case CExpr::Kind::Var: {
        lv.is_var = true;
        lv.var = lookup(e->name, e->loc);
        lv.type = type_of_var(lv.var);
        return lv;
      }
      case CExpr::Kind::Unary:
        if (e->name == "*") {
          TermPtr p = lower_value(e->args[0], pre);
          CTypePtr pt = canon_type(expr_type(e->args[0]));
          if (!pt || pt->kind != CType::Kind::Ptr)
            err(DiagCode::SortMismatch, e->loc, "'*' applied to a non-pointer");
          lv.addr = p;
          lv.type = pt->pointee;
          return lv;
        }
        break;
      case CExpr::Kind::Member: {
        if (!e->arrow) {
          // (*p).f sugar
          if (e->args[0]->kind == CExpr::Kind::Unary && e->args[0]->name == "*") {
            TermPtr base = lower_value(e->args[0]->args[0], pre);
            lv.type = field_type(expr_type(e->args[0]->args[0]), e->name, e->loc);
            lv.addr = Term::field_addr(base, e->name, sort_of_ctype(canon_type(lv.type)));
            return lv;
          }
          err(DiagCode::UnsupportedFeature, e->loc,
              "'.' member access on struct values is not supported");
        }
        TermPtr base = lower_value(e->args[0], pre);
        lv.type = field_type(expr_type(e->args[0]), e->name, e->loc);
        lv.addr = Term::field_addr(base, e->name, sort_of_ctype(canon_type(lv.type)));
        return lv;
      }
      case CExpr::Kind::Index: {
        TermPtr base = lower_value(e->args[0], pre);
        TermPtr idx = lower_value(e->args[1], pre);
        CTypePtr bt = canon_type(expr_type(e->args[0]));
        if (!bt || bt->kind != CType::Kind::Ptr)
          err(DiagCode::SortMismatch, e->loc, "subscript on a non-pointer");
        lv.type = bt->pointee;
        lv.addr = Term::index_addr(base, idx, sort_of_ctype(canon_type(lv.type)));
        return lv;
      }
      default:
        break;
    }
    err(DiagCode::UnsupportedStatement, e->loc, "expression is not an lvalue");
  }

  // best-effort C type of an expression (enough for pointer/int decisions)
  CTypePtr expr_type(const CExprPtr& e) {
    switch (e->kind) {
      case CExpr::Kind::IntLit: return CType::int_type();
      case CExpr::Kind::Var: {
        if (e->name == "NULL") return CType::ptr(CType::void_type());
        auto it = rename_.find(e->name);
        if (it == rename_.end()) return CType::int_type();
        return type_of_var(it->second);
      }
      case CExpr::Kind::Member: {
        CTypePtr base = expr_type(e->args[0]);
        if (!e->arrow && e->args[0]->kind == CExpr::Kind::Unary && e->args[0]->name == "*")
          base = expr_type(e->args[0]->args[0]);
        CTypePtr c = canon_type(base);
        if (c && c->kind == CType::Kind::Ptr) {
          const StructDef* sd = struct_of(c->pointee);
          if (sd)
            for (const auto& f : sd->fields)
              if (f.name == e->name) return f.type;
        }
        return CType::int_type();
      }
      case CExpr::Kind::Index: {
        CTypePtr c = canon_type(expr_type(e->args[0]));
        return c && c->kind == CType::Kind::Ptr ? c->pointee : CType::int_type();
      }
      case CExpr::Kind::Unary:
        if (e->name == "*") {
          CTypePtr c = canon_type(expr_type(e->args[0]));
          return c && c->kind == CType::Kind::Ptr ? c->pointee : CType::int_type();
        }
        if (e->name == "&") return CType::ptr(expr_type(e->args[0]));
        return CType::int_type();
      case CExpr::Kind::Call: {
        auto it = prog_.function_index.find(e->name);
        if (it != prog_.function_index.end()) return prog_.functions[it->second].ret;
        return CType::int_type();
      }
      case CExpr::Kind::Cond: return expr_type(e->args[1]);
      case CExpr::Kind::Assign: return expr_type(e->args[0]);
      default: return CType::int_type();
    }
  }

  TermPtr lower_value(const CExprPtr& e, std::vector<XStmtPtr>& pre) {
    switch (e->kind) {
      case CExpr::Kind::IntLit: return Term::int_lit(e->int_val);
      case CExpr::Kind::Var: {
        if (e->name == "NULL") return Term::null();
        std::string v = lookup(e->name, e->loc);
        return var_term(v);
      }
      case CExpr::Kind::Unary: {
        if (e->name == "-") {
          TermPtr t = lower_value(e->args[0], pre);
          if (t->kind == TermKind::IntLit) return Term::int_lit(-t->int_val);
          return Term::app("neg", {t}, AppKind::Builtin, sort_int());
        }
        if (e->name == "~") {
          TermPtr t = lower_value(e->args[0], pre);
          return Term::app("~", {t}, AppKind::Builtin, sort_int());
        }
        if (e->name == "*") return lower_load(e, pre);
        if (e->name == "&") {
          std::vector<XStmtPtr> dummy;
          LValue lv = lower_lvalue(e->args[0], pre);
          if (lv.is_var)
            err(DiagCode::UnsupportedFeature, e->loc,
                "address of a local variable is not supported");
          return lv.addr;
        }
        if (e->name == "!") return lower_bool(e, pre);
        err(DiagCode::UnsupportedStatement, e->loc, "unsupported unary operator " + e->name);
      }
      case CExpr::Kind::Binary: {
        const std::string& op = e->name;
        if (op == "&&" || op == "||" || op == "==" || op == "!=" || op == "<" || op == "<=" ||
            op == ">" || op == ">=")
          return lower_bool(e, pre);
        TermPtr a = lower_value(e->args[0], pre);
        TermPtr b = lower_value(e->args[1], pre);
        return Term::app(op, {a, b}, AppKind::Builtin, sort_int());
      }
      case CExpr::Kind::Member:
      case CExpr::Kind::Index:
        return lower_load(e, pre);
      case CExpr::Kind::Call: {
        CTypePtr rt = expr_type(e);
        if (canon_type(rt) && canon_type(rt)->kind == CType::Kind::Void)
          err(DiagCode::SortMismatch, e->loc, "void call used as a value");
        std::string tmp = fresh_temp(rt);
        pre.push_back(lower_call(e, tmp, std::nullopt, pre));
        return var_term(tmp);
      }
      case CExpr::Kind::Cond: {
        CTypePtr rt = expr_type(e);
        std::string tmp = fresh_temp(rt);
        auto decl = make(XStmt::Kind::Decl, e->loc);
        mut(decl).var = tmp;
        mut(decl).var_sort = sort_of_ctype(canon_type(rt));
        pre.push_back(decl);
        auto assign_then = make(XStmt::Kind::Assign, e->loc);
        auto assign_else = make(XStmt::Kind::Assign, e->loc);
        std::vector<XStmtPtr> tpre, epre;
        mut(assign_then).var = tmp;
        mut(assign_then).rhs = lower_value(e->args[1], tpre);
        mut(assign_else).var = tmp;
        mut(assign_else).rhs = lower_value(e->args[2], epre);
        tpre.push_back(assign_then);
        epre.push_back(assign_else);
        pre.push_back(lower_branching(e->args[0], block_of(tpre, e->loc),
                                      block_of(epre, e->loc), pre));
        return var_term(tmp);
      }
      default:
        err(DiagCode::UnsupportedStatement, e->loc, "unsupported expression");
    }
  }

  // comparison-producing expressions materialize 0/1 through a branch
  TermPtr lower_bool(const CExprPtr& e, std::vector<XStmtPtr>& pre) {
    std::string tmp = fresh_temp(CType::int_type());
    auto decl = make(XStmt::Kind::Decl, e->loc);
    mut(decl).var = tmp;
    mut(decl).var_sort = sort_int();
    pre.push_back(decl);
    auto set1 = make(XStmt::Kind::Assign, e->loc);
    mut(set1).var = tmp;
    mut(set1).rhs = Term::int_lit(1);
    auto set0 = make(XStmt::Kind::Assign, e->loc);
    mut(set0).var = tmp;
    mut(set0).rhs = Term::int_lit(0);
    pre.push_back(lower_branching(e, set1, set0, pre));
    return var_term(tmp);
  }

  TermPtr lower_load(const CExprPtr& e, std::vector<XStmtPtr>& pre) {
    LValue lv = lower_lvalue(e, pre);
    if (lv.is_var) return var_term(lv.var);
    std::string tmp = fresh_temp(lv.type);
    auto load = make(XStmt::Kind::Load, e->loc);
    mut(load).var = tmp;
    mut(load).var_sort = sort_of_ctype(canon_type(lv.type));
    mut(load).addr = lv.addr;
    pre.push_back(load);
    return var_term(tmp);
  }

  XStmtPtr lower_call(const CExprPtr& e, std::optional<std::string> result,
                      const std::optional<WhereClause>& where, std::vector<XStmtPtr>& pre) {
    auto call = make(XStmt::Kind::Call, e->loc);
    mut(call).callee = e->name;
    if (result) mut(call).var = *result;
    auto fit = prog_.function_index.find(e->name);
    if (fit == prog_.function_index.end())
      err(DiagCode::UnknownFunction, e->loc, "call to undeclared function '" + e->name + "'");
    const CFunction& callee = prog_.functions[fit->second];
    if (callee.params.size() != e->args.size())
      err(DiagCode::ArityMismatch, e->loc,
          "call to '" + e->name + "' with " + std::to_string(e->args.size()) + " arguments");
    for (const auto& a : e->args) mut(call).args.push_back(lower_value(a, pre));
    if (where) {
      for (const auto& [spec, branch] : where->entries) {
        bool found = false;
        for (const auto& s : callee.specs)
          if (s.name && *s.name == spec) found = true;
        if (!found)
          err(DiagCode::UnknownSpec, where->loc,
              "function '" + e->name + "' has no specification named '" + spec + "'");
        if (branch) {
          if (mut(call).where.per_branch.count(*branch))
            err(DiagCode::NameOverlap, where->loc,
                "branch '" + *branch + "' mapped to two specifications");
          mut(call).where.per_branch[*branch] = spec;
        } else {
          mut(call).where.default_spec = spec;
        }
      }
    }
    return call;
  }

  XStmtPtr block_of(std::vector<XStmtPtr> items, SourceLoc loc) {
    if (items.size() == 1) return items[0];
    auto b = make(XStmt::Kind::Block, std::move(loc));
    mut(b).items = std::move(items);
    return b;
  }

  // conditions: pure parts become atoms; short-circuit operators with
  // effectful operands split into nested branching
  PurePtr cond_atom(const CExprPtr& e, std::vector<XStmtPtr>& pre) {
    switch (e->kind) {
      case CExpr::Kind::Binary: {
        const std::string& op = e->name;
        CmpOp c;
        bool isc = true;
        if (op == "==") c = CmpOp::Eq;
        else if (op == "!=") c = CmpOp::Ne;
        else if (op == "<") c = CmpOp::Lt;
        else if (op == "<=") c = CmpOp::Le;
        else if (op == ">") c = CmpOp::Gt;
        else if (op == ">=") c = CmpOp::Ge;
        else isc = false;
        if (isc)
          return PureAtom::cmp(c, lower_value(e->args[0], pre), lower_value(e->args[1], pre));
        if (op == "&&")
          return PureAtom::conj({cond_atom(e->args[0], pre), cond_atom(e->args[1], pre)});
        if (op == "||")
          return PureAtom::disj({cond_atom(e->args[0], pre), cond_atom(e->args[1], pre)});
        break;
      }
      case CExpr::Kind::Unary:
        if (e->name == "!") return PureAtom::negate(cond_atom(e->args[0], pre));
        break;
      default:
        break;
    }
    TermPtr t = lower_value(e, pre);
    CTypePtr ct = canon_type(expr_type(e));
    if (ct && ct->kind == CType::Kind::Ptr) return PureAtom::ne(t, Term::null());
    return PureAtom::ne(t, Term::int_lit(0));
  }

  // if (cond) then else with short-circuit semantics preserved for effectful
  // operands; pure conditions stay single atoms
  XStmtPtr lower_branching(const CExprPtr& cond, XStmtPtr then_s, XStmtPtr else_s,
                           std::vector<XStmtPtr>& pre) {
    if (cond->kind == CExpr::Kind::Binary && cond->name == "&&" &&
        (effectful(cond->args[1]))) {
      XStmtPtr inner = lower_branching_nested(cond->args[1], then_s, else_s);
      return lower_branching(cond->args[0], inner, else_s, pre);
    }
    if (cond->kind == CExpr::Kind::Binary && cond->name == "||" &&
        (effectful(cond->args[1]))) {
      XStmtPtr inner = lower_branching_nested(cond->args[1], then_s, else_s);
      return lower_branching(cond->args[0], then_s, inner, pre);
    }
    if (cond->kind == CExpr::Kind::Unary && cond->name == "!")
      return lower_branching(cond->args[0], else_s, then_s, pre);
    auto s = make(XStmt::Kind::If, cond->loc);
    mut(s).cond = cond_atom(cond, pre);
    mut(s).then_branch = std::move(then_s);
    mut(s).else_branch = std::move(else_s);
    return s;
  }

  XStmtPtr lower_branching_nested(const CExprPtr& cond, XStmtPtr then_s, XStmtPtr else_s) {
    std::vector<XStmtPtr> pre;
    XStmtPtr s = lower_branching(cond, std::move(then_s), std::move(else_s), pre);
    pre.push_back(s);
    return block_of(std::move(pre), cond->loc);
  }

  // -- statements --

  XStmtPtr lower_block(const CStmt& b) {
    auto saved_types = scope_types_;
    auto saved_renames = rename_;
    auto out = make(XStmt::Kind::Block, b.loc);
    for (const auto& item : b.items) lower_stmt(*item, mut(out).items);
    scope_types_ = saved_types;
    rename_ = saved_renames;
    return out;
  }

  void lower_stmt(const CStmt& s, std::vector<XStmtPtr>& out) {
    switch (s.kind) {
      case CStmt::Kind::Empty: return;
      case CStmt::Kind::Block:
        out.push_back(lower_block(s));
        return;
      case CStmt::Kind::Decl: {
        CTypePtr ct = canon_type(s.decl_type);
        if (ct && ct->kind == CType::Kind::Struct)
          err(DiagCode::UnsupportedFeature, s.loc, "struct-valued local variable");
        TermPtr init;
        if (s.expr) {
          if (s.expr->kind == CExpr::Kind::Call) {
            std::string unique = declare(s.decl_name, s.decl_type);
            auto decl = make(XStmt::Kind::Decl, s.loc);
            mut(decl).var = unique;
            mut(decl).var_sort = sort_of_ctype(ct);
            out.push_back(decl);
            out.push_back(lower_call(s.expr, unique, s.where, out));
            return;
          }
          init = lower_value(s.expr, out);
        }
        std::string unique = declare(s.decl_name, s.decl_type);
        auto decl = make(XStmt::Kind::Decl, s.loc);
        mut(decl).var = unique;
        mut(decl).var_sort = sort_of_ctype(ct);
        mut(decl).rhs = init;
        out.push_back(decl);
        return;
      }
      case CStmt::Kind::Expr:
        lower_expr_stmt(s, out);
        return;
      case CStmt::Kind::If: {
        std::vector<XStmtPtr> tpre, epre;
        XStmtPtr then_s = lower_block_or_stmt(s.then_branch);
        XStmtPtr else_s = s.else_branch ? lower_block_or_stmt(s.else_branch)
                                        : make(XStmt::Kind::Block, s.loc);
        out.push_back(lower_branching(s.cond, then_s, else_s, out));
        return;
      }
      case CStmt::Kind::While:
      case CStmt::Kind::DoWhile:
      case CStmt::Kind::For:
        lower_loop(s, out);
        return;
      case CStmt::Kind::Switch: {
        auto sw = make(XStmt::Kind::Switch, s.loc);
        mut(sw).scrutinee = lower_value(s.cond, out);
        for (const auto& c : s.cases) {
          XSwitchCase xc;
          xc.values = c.values;
          xc.is_default = c.is_default;
          xc.loc = c.loc;
          xc.entry = mut(sw).switch_body.size();
          mut(sw).cases.push_back(xc);
          for (const auto& st : c.stmts) lower_stmt(*st, mut(sw).switch_body);
          // fix entry index after the fact: entries index the flattened body
          mut(sw).cases.back().entry = xc.entry;
        }
        out.push_back(sw);
        return;
      }
      case CStmt::Kind::Break:
        out.push_back(make(XStmt::Kind::Break, s.loc));
        return;
      case CStmt::Kind::Continue:
        out.push_back(make(XStmt::Kind::Continue, s.loc));
        return;
      case CStmt::Kind::Return: {
        auto r = make(XStmt::Kind::Return, s.loc);
        if (s.expr) mut(r).ret = lower_value(s.expr, out);
        out.push_back(r);
        return;
      }
      case CStmt::Kind::Annot: {
        out.push_back(lower_annot(s.annots[0], s.loc));
        return;
      }
    }
  }

  XStmtPtr lower_block_or_stmt(const CStmtPtr& s) {
    if (s->kind == CStmt::Kind::Block) return lower_block(*s);
    auto saved_types = scope_types_;
    auto saved_renames = rename_;
    std::vector<XStmtPtr> items;
    lower_stmt(*s, items);
    scope_types_ = saved_types;
    rename_ = saved_renames;
    return block_of(std::move(items), s->loc);
  }

  void lower_expr_stmt(const CStmt& s, std::vector<XStmtPtr>& out) {
    const CExprPtr& e = s.expr;
    if (e->kind == CExpr::Kind::Call) {
      out.push_back(lower_call(e, std::nullopt, s.where, out));
      return;
    }
    if (s.where)
      err(DiagCode::SyntaxError, s.where->loc, "'where' annotation on a non-call statement");
    if (e->kind == CExpr::Kind::Assign) {
      lower_assign(e, out);
      return;
    }
    if ((e->kind == CExpr::Kind::Postfix || e->kind == CExpr::Kind::Unary) &&
        (e->name == "++" || e->name == "--")) {
      // x++  =>  x = x +/- 1
      std::string op = e->name == "++" ? "+" : "-";
      LValue lv = lower_lvalue(e->args[0], out);
      TermPtr old = read_lvalue(lv, e->loc, out);
      TermPtr next = Term::app(op, {old, Term::int_lit(1)}, AppKind::Builtin, sort_int());
      write_lvalue(lv, next, e->loc, out);
      return;
    }
    // effect-free expression statement: evaluate for diagnostics, drop value
    lower_value(e, out);
  }

  TermPtr read_lvalue(const LValue& lv, const SourceLoc& loc, std::vector<XStmtPtr>& out) {
    if (lv.is_var) return var_term(lv.var);
    std::string tmp = fresh_temp(lv.type);
    auto load = make(XStmt::Kind::Load, loc);
    mut(load).var = tmp;
    mut(load).var_sort = sort_of_ctype(canon_type(lv.type));
    mut(load).addr = lv.addr;
    out.push_back(load);
    return var_term(tmp);
  }

  void write_lvalue(const LValue& lv, const TermPtr& value, const SourceLoc& loc,
                    std::vector<XStmtPtr>& out) {
    if (lv.is_var) {
      auto a = make(XStmt::Kind::Assign, loc);
      mut(a).var = lv.var;
      mut(a).var_sort = sort_of_ctype(canon_type(lv.type));
      mut(a).rhs = value;
      out.push_back(a);
      return;
    }
    auto st = make(XStmt::Kind::Store, loc);
    mut(st).addr = lv.addr;
    mut(st).rhs = value;
    out.push_back(st);
  }

  void lower_assign(const CExprPtr& e, std::vector<XStmtPtr>& out) {
    const std::string& op = e->name;
    // direct `x = f(...)` binds the call result without a temp
    if (op == "=" && e->args[0]->kind == CExpr::Kind::Var &&
        e->args[1]->kind == CExpr::Kind::Call) {
      std::string v = lookup(e->args[0]->name, e->loc);
      out.push_back(lower_call(e->args[1], v, std::nullopt, out));
      return;
    }
    LValue lv = lower_lvalue(e->args[0], out);
    TermPtr rhs = lower_value(e->args[1], out);
    if (op != "=") {
      TermPtr old = read_lvalue(lv, e->loc, out);
      std::string binop = op.substr(0, 1); // += -> +
      rhs = Term::app(binop, {old, rhs}, AppKind::Builtin, sort_int());
    }
    write_lvalue(lv, rhs, e->loc, out);
  }

  void lower_loop(const CStmt& s, std::vector<XStmtPtr>& out) {
    auto saved_types = scope_types_;
    auto saved_renames = rename_;

    auto loop = make(XStmt::Kind::Loop, s.loc);
    std::vector<XStmtPtr> init_stmts;

    if (s.kind == CStmt::Kind::For && s.init) lower_stmt(*s.init, init_stmts);

    // loop condition: pure conditions become the loop guard; effectful ones
    // lower to break-unless checks at the head of the body
    std::vector<XStmtPtr> head;
    if (s.cond && !effectful(s.cond)) {
      std::vector<XStmtPtr> pre;
      mut(loop).cond = cond_atom(s.cond, pre);
      if (!pre.empty())
        err(DiagCode::UnsupportedStatement, s.loc, "loop condition lowering failed");
    } else {
      mut(loop).cond = PureAtom::bool_lit(true);
      if (s.cond) emit_break_unless(s.cond, head);
    }

    XStmtPtr body = lower_block_or_stmt(s.body);
    if (!head.empty()) {
      std::vector<XStmtPtr> items = head;
      items.push_back(body);
      body = block_of(std::move(items), s.loc);
    }
    mut(loop).body = body;

    if (s.kind == CStmt::Kind::For && s.step) {
      std::vector<XStmtPtr> step_items;
      CStmt step_stmt;
      step_stmt.kind = CStmt::Kind::Expr;
      step_stmt.loc = s.step->loc;
      step_stmt.expr = s.step;
      lower_expr_stmt(step_stmt, step_items);
      mut(loop).step = block_of(std::move(step_items), s.step->loc);
    }

    for (const auto& a : s.annots)
      if (a.kind == Annot::Kind::Inv) mut(loop).annot = lower_inv(a);

    if (s.kind == CStmt::Kind::DoWhile) {
      // run the body once, then loop
      out.insert(out.end(), init_stmts.begin(), init_stmts.end());
      out.push_back(mut(loop).body);
      out.push_back(loop);
    } else {
      out.insert(out.end(), init_stmts.begin(), init_stmts.end());
      out.push_back(loop);
    }

    scope_types_ = saved_types;
    rename_ = saved_renames;
  }

  void emit_break_unless(const CExprPtr& e, std::vector<XStmtPtr>& out) {
    if (e->kind == CExpr::Kind::Binary && e->name == "&&") {
      emit_break_unless(e->args[0], out);
      emit_break_unless(e->args[1], out);
      return;
    }
    auto brk = make(XStmt::Kind::Break, e->loc);
    auto nothing = make(XStmt::Kind::Block, e->loc);
    out.push_back(lower_branching(e, nothing, brk, out));
  }

  XStmtPtr lower_annot(const Annot& a, const SourceLoc& loc) {
    auto s = make(XStmt::Kind::Annot, loc);
    mut(s).annot = resolve_annot(a);
    return s;
  }

  FormulaScope annot_scope() {
    FormulaScope scope;
    scope.allow_deref = true;
    scope.field_sorts = out_.field_sorts;
    for (const auto& [name, type] : scope_types_) {
      scope.prog_vars.insert(name);
      scope.var_sorts[name] = sort_of_ctype(canon_type(type));
    }
    for (const auto& p : fn_.params) scope.var_sorts[p.name + "@pre"] = p.sort;
    // with-variables of the root specification stay visible in the body
    if (fn_.root_spec >= 0)
      for (const auto& [n, srt] : fn_.specs[fn_.root_spec].with_vars) scope.var_sorts[n] = srt;
    return scope;
  }

  Annot resolve_annot(const Annot& a) {
    Annot r = a;
    FormulaScope scope = annot_scope();
    switch (a.kind) {
      case Annot::Kind::AssertFull:
      case Annot::Kind::AssertPartial:
        resolve_assertion(r.assertion, out_.env, scope, a.loc);
        break;
      case Annot::Kind::WhichImplies:
        resolve_assertion(r.assertion, out_.env, scope, a.loc);
        resolve_assertion(r.post, out_.env, scope, a.loc);
        break;
      case Annot::Kind::Inv:
        resolve_assertion(r.assertion, out_.env, scope, a.loc);
        for (const auto& m : a.entry_map)
          if (m.to != "*" && !r.assertion.find(m.to))
            err(DiagCode::UnknownBranchName, a.loc,
                "entry mapping targets unknown invariant branch '" + m.to + "'");
        break;
      case Annot::Kind::BranchName:
        for (auto& [name, cond] : r.name_cases) cond = resolve_pure(cond, out_.env, scope, a.loc);
        break;
      case Annot::Kind::BranchJoin:
      case Annot::Kind::BranchClear:
      case Annot::Kind::BranchTransition:
      case Annot::Kind::Destruct:
        break;
    }
    out_.field_sorts = scope.field_sorts;
    return r;
  }

  Annot lower_inv(const Annot& a) { return resolve_annot(a); }

  ResolvedProgram& out_;
  const AnnotatedProgram& prog_;
  ResolvedFunction& fn_;
  std::map<std::string, CTypePtr> scope_types_; // renamed -> type
  std::map<std::string, std::string> rename_;   // source name -> renamed
  int temp_counter_ = 0;
};

} // namespace

ResolvedProgram resolve(const AnnotatedProgram& prog, LogicEnv env) {
  ResolvedProgram out;
  out.env = std::move(env);

  // struct fields define cell value sorts; names must agree across structs
  for (const auto& sd : prog.structs) {
    for (const auto& f : sd.fields) {
      Sort s = sort_of_ctype(f.type && f.type->kind == CType::Kind::Named ? f.type : f.type);
      if (f.type->kind == CType::Kind::Named) s = sort_addr(); // typedef'd struct pointers
      if (f.type->kind == CType::Kind::Ptr) s = sort_addr();
      if (f.type->kind == CType::Kind::Int || f.type->kind == CType::Kind::Enum) s = sort_int();
      auto it = out.field_sorts.find(f.name);
      if (it != out.field_sorts.end() && it->second != s) {
        out.diags.push_back({Severity::Error, DiagCode::DuplicateDefinition, f.loc,
                             "field '" + f.name + "' redeclared with a different type"});
        continue;
      }
      out.field_sorts[f.name] = s;
    }
  }

  // phase 1: signatures and specifications
  for (const auto& f : prog.functions) {
    ResolvedFunction rf;
    rf.name = f.name;
    rf.ret = f.ret;
    rf.ret_sort = sort_of_ctype(f.ret);
    rf.loc = f.loc;
    for (const auto& p : f.params) {
      CTypePtr t = p.type;
      // resolve typedef chains against the program's table
      while (t && t->kind == CType::Kind::Named) {
        auto it = prog.typedefs.find(t->name);
        if (it == prog.typedefs.end()) break;
        t = it->second;
      }
      rf.params.push_back(ResolvedParam{p.name, p.type, sort_of_ctype(t)});
    }
    {
      CTypePtr t = f.ret;
      while (t && t->kind == CType::Kind::Named) {
        auto it = prog.typedefs.find(t->name);
        if (it == prog.typedefs.end()) break;
        t = it->second;
      }
      rf.ret_sort = sort_of_ctype(t);
    }

    std::set<std::string> spec_names;
    for (const auto& s : f.specs) {
      try {
        FuncSpec spec;
        spec.name = s.name.value_or("");
        spec.base = s.base;
        spec.loc = s.loc;
        if (!spec_names.insert(spec.name).second)
          throw ParseError(DiagCode::DuplicateDefinition, s.loc,
                           spec.name.empty()
                               ? "function '" + f.name + "' has two unnamed specifications"
                               : "duplicate specification '" + spec.name + "'");
        FormulaScope scope;
        scope.allow_deref = true;
        scope.field_sorts = out.field_sorts;
        for (const auto& p : rf.params) {
          scope.prog_vars.insert(p.name);
          scope.var_sorts[p.name] = p.sort;
          scope.var_sorts[p.name + "@pre"] = p.sort;
        }
        std::set<std::string> withs;
        for (const auto& w : s.with_vars) {
          if (!withs.insert(w).second)
            throw ParseError(DiagCode::DuplicateDefinition, s.loc,
                             "duplicate With variable '" + w + "'");
          if (scope.prog_vars.count(w))
            throw ParseError(DiagCode::NameOverlap, s.loc,
                             "With variable '" + w + "' shadows a parameter");
        }
        spec.require = s.require;
        resolve_assertion(spec.require, out.env, scope, s.loc);
        if (rf.ret_sort.name != "?" && !(f.ret && f.ret->kind == CType::Kind::Void))
          scope.var_sorts["__return"] = rf.ret_sort;
        spec.ensure = s.ensure;
        resolve_assertion(spec.ensure, out.env, scope, s.loc);
        // free logical variables of require/ensure must be With-bound
        for (const Assertion* asrt : {&spec.require, &spec.ensure}) {
          for (const auto& b : asrt->branches) {
            for (const auto& v : b.heap.free_logic_vars()) {
              if (!withs.count(v) && v != "__return")
                throw ParseError(DiagCode::UnknownVariable, s.loc,
                                 "free logical variable '" + v +
                                     "' is not bound by With or a parameter");
            }
          }
        }
        for (const auto& w : s.with_vars) {
          auto it = scope.var_sorts.find(w);
          spec.with_vars.emplace_back(
              w, it != scope.var_sorts.end() && it->second.name != "?" ? it->second : sort_int());
        }
        out.field_sorts = scope.field_sorts;
        rf.specs.push_back(std::move(spec));
      } catch (const ParseError& e) {
        out.diags.push_back({Severity::Error, e.code, e.loc, e.what()});
      }
    }

    // derivation wiring: exactly one root among specs (when any exist)
    int root = -1;
    for (std::size_t i = 0; i < rf.specs.size(); ++i) {
      if (!rf.specs[i].base) {
        if (root >= 0)
          out.diags.push_back({Severity::Error, DiagCode::DuplicateDefinition, rf.specs[i].loc,
                               "function '" + f.name +
                                   "' has two specifications without a derivation link"});
        else root = static_cast<int>(i);
      } else {
        bool found = false;
        for (const auto& other : rf.specs)
          if (other.name == *rf.specs[i].base) found = true;
        if (!found)
          out.diags.push_back({Severity::Error, DiagCode::UnknownSpec, rf.specs[i].loc,
                               "base specification '" + *rf.specs[i].base + "' does not exist"});
      }
    }
    rf.root_spec = root;
    if (!rf.specs.empty() && root < 0)
      out.diags.push_back({Severity::Error, DiagCode::UnknownSpec, rf.loc,
                           "function '" + f.name + "' has no root specification"});

    out.function_index[rf.name] = out.functions.size();
    out.functions.push_back(std::move(rf));
  }

  // phase 2: lower bodies (callee specs are now known)
  for (std::size_t i = 0; i < prog.functions.size(); ++i) {
    const CFunction& f = prog.functions[i];
    if (!f.body) continue;
    try {
      Lowerer low(out, prog, out.functions[i]);
      out.functions[i].body = low.run(*f.body);
    } catch (const ParseError& e) {
      out.diags.push_back({Severity::Error, e.code, e.loc, e.what()});
    }
  }

  return out;
}

} // namespace sepveri
