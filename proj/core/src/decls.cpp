#include "sepveri/decls.hpp"

namespace sepveri {

const SortDef* LogicEnv::find_sort(const std::string& n) const {
  auto it = sorts.find(n);
  return it == sorts.end() ? nullptr : &it->second;
}

const PureFunDef* LogicEnv::find_fun(const std::string& n) const {
  auto it = funs.find(n);
  return it == funs.end() ? nullptr : &it->second;
}

const PredicateDef* LogicEnv::find_pred(const std::string& n) const {
  auto it = preds.find(n);
  return it == preds.end() ? nullptr : &it->second;
}

const SortDef* LogicEnv::sort_of_ctor(const std::string& ctor, const CtorDef** out) const {
  for (const auto& [_, sd] : sorts)
    for (const auto& c : sd.ctors)
      if (c.name == ctor) {
        if (out) *out = &c;
        return &sd;
      }
  return nullptr;
}

namespace {

// One-level pattern match: pattern is a var or a constructor applied to vars.
bool match_pattern_term(const TermPtr& pat, const TermPtr& val, TermMap& binding) {
  if (pat->kind == TermKind::LogicVar) {
    auto it = binding.find(pat->name);
    if (it != binding.end()) return term_eq(it->second, val);
    binding[pat->name] = val;
    return true;
  }
  if (pat->kind == TermKind::App && pat->app_kind == AppKind::Ctor) {
    if (val->kind != TermKind::App || val->app_kind != AppKind::Ctor || val->name != pat->name ||
        val->args.size() != pat->args.size())
      return false;
    for (std::size_t i = 0; i < pat->args.size(); ++i)
      if (!match_pattern_term(pat->args[i], val->args[i], binding)) return false;
    return true;
  }
  if (pat->kind == TermKind::IntLit) return term_eq(pat, val);
  return false;
}

TermPtr rewrite_once(const TermPtr& t, const LogicEnv& env, bool& fired) {
  if (t->args.empty()) return t;
  Term copy = *t;
  for (auto& a : copy.args) a = rewrite_once(a, env, fired);
  TermPtr rebuilt = std::make_shared<Term>(std::move(copy));
  if (rebuilt->kind == TermKind::App &&
      (rebuilt->app_kind == AppKind::PureFun || rebuilt->app_kind == AppKind::Unresolved)) {
    const PureFunDef* fd = env.find_fun(rebuilt->name);
    if (fd) {
      for (const auto& eq : fd->equations) {
        if (eq.patterns.size() != rebuilt->args.size()) continue;
        TermMap binding;
        bool ok = true;
        for (std::size_t i = 0; i < eq.patterns.size() && ok; ++i)
          ok = match_pattern_term(eq.patterns[i], rebuilt->args[i], binding);
        if (ok) {
          fired = true;
          return subst_term(eq.rhs, binding);
        }
      }
    }
  }
  // ground arithmetic folds here too so equations over Z simplify
  if (rebuilt->kind == TermKind::App && rebuilt->app_kind == AppKind::Builtin &&
      rebuilt->args.size() == 2 && rebuilt->args[0]->kind == TermKind::IntLit &&
      rebuilt->args[1]->kind == TermKind::IntLit) {
    std::int64_t a = rebuilt->args[0]->int_val, b = rebuilt->args[1]->int_val;
    const std::string& op = rebuilt->name;
    if (op == "+") { fired = true; return Term::int_lit(a + b); }
    if (op == "-") { fired = true; return Term::int_lit(a - b); }
    if (op == "*") { fired = true; return Term::int_lit(a * b); }
  }
  return rebuilt;
}

} // namespace

TermPtr rewrite_with_equations(const TermPtr& t, const LogicEnv& env, int fuel) {
  TermPtr cur = t;
  while (fuel-- > 0) {
    bool fired = false;
    cur = rewrite_once(cur, env, fired);
    if (!fired) break;
  }
  return cur;
}

} // namespace sepveri
