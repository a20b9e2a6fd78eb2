#include "sepveri/term.hpp"

#include <functional>

namespace sepveri {

namespace {

TermPtr make(Term t) { return std::make_shared<Term>(std::move(t)); }

// Rank in the representative order; lower is preferred as representative.
int kind_rank(const Term& t) {
  switch (t.kind) {
    case TermKind::IntLit: return 0;
    case TermKind::Null: return 1;
    case TermKind::Undef: return 2;
    case TermKind::App:
      // nullary constructors (nil) sit with literals
      if (t.app_kind == AppKind::Ctor && t.args.empty()) return 3;
      return 8;
    case TermKind::ProgVar: return t.at_pre ? 5 : 4;
    case TermKind::LogicVar: return 6;
    case TermKind::FieldAddr: return 9;
    case TermKind::Index: return 10;
  }
  return 11;
}

} // namespace

TermPtr Term::int_lit(std::int64_t v) {
  Term t;
  t.kind = TermKind::IntLit;
  t.int_val = v;
  t.sort = sort_int();
  return make(std::move(t));
}

TermPtr Term::null() {
  Term t;
  t.kind = TermKind::Null;
  t.sort = sort_addr();
  return make(std::move(t));
}

TermPtr Term::undef() {
  Term t;
  t.kind = TermKind::Undef;
  return make(std::move(t));
}

TermPtr Term::prog_var(std::string name, bool at_pre, Sort sort) {
  Term t;
  t.kind = TermKind::ProgVar;
  t.name = std::move(name);
  t.at_pre = at_pre;
  t.sort = std::move(sort);
  return make(std::move(t));
}

TermPtr Term::logic_var(std::string name, Sort sort) {
  Term t;
  t.kind = TermKind::LogicVar;
  t.name = std::move(name);
  t.sort = std::move(sort);
  return make(std::move(t));
}

TermPtr Term::field_addr(TermPtr base, std::string field, Sort value_sort) {
  Term t;
  t.kind = TermKind::FieldAddr;
  t.name = std::move(field);
  t.args = {std::move(base)};
  t.sort = std::move(value_sort); // sort of the pointed-to value
  return make(std::move(t));
}

TermPtr Term::index_addr(TermPtr base, TermPtr index, Sort value_sort) {
  Term t;
  t.kind = TermKind::Index;
  t.args = {std::move(base), std::move(index)};
  t.sort = std::move(value_sort);
  return make(std::move(t));
}

TermPtr Term::app(std::string fn, std::vector<TermPtr> args, AppKind k, Sort sort) {
  Term t;
  t.kind = TermKind::App;
  t.name = std::move(fn);
  t.args = std::move(args);
  t.app_kind = k;
  t.sort = std::move(sort);
  return make(std::move(t));
}

int term_cmp(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return 0;
  int ra = kind_rank(*a), rb = kind_rank(*b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case TermKind::IntLit:
      if (a->int_val != b->int_val) return a->int_val < b->int_val ? -1 : 1;
      return 0;
    case TermKind::Null:
    case TermKind::Undef:
      return 0;
    case TermKind::ProgVar:
    case TermKind::LogicVar: {
      int c = a->name.compare(b->name);
      if (c != 0) return c < 0 ? -1 : 1;
      if (a->at_pre != b->at_pre) return a->at_pre ? 1 : -1;
      return 0;
    }
    default: break;
  }
  // Compound terms: compare head name, then children.
  int c = a->name.compare(b->name);
  if (c != 0) return c < 0 ? -1 : 1;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    c = term_cmp(a->args[i], b->args[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool term_eq(const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) == 0; }

std::size_t term_hash(const TermPtr& t) {
  std::size_t h = static_cast<std::size_t>(t->kind) * 0x9e3779b97f4a7c15ULL;
  h ^= std::hash<std::string>{}(t->name) + 0x9e3779b9 + (h << 6) + (h >> 2);
  h ^= std::hash<std::int64_t>{}(t->int_val) + (h << 6);
  h ^= t->at_pre ? 0x5bd1e995 : 0;
  for (const auto& a : t->args) h ^= term_hash(a) + 0x9e3779b9 + (h << 6) + (h >> 2);
  return h;
}

void collect_vars(const TermPtr& t, std::set<std::string>& logic_vars,
                  std::set<std::string>& prog_vars) {
  if (t->kind == TermKind::LogicVar) logic_vars.insert(t->name);
  if (t->kind == TermKind::ProgVar) prog_vars.insert(t->name);
  for (const auto& a : t->args) collect_vars(a, logic_vars, prog_vars);
}

TermPtr replace_terms(const TermPtr& t, const std::map<TermPtr, TermPtr, TermLess>& m) {
  auto it = m.find(t);
  if (it != m.end()) return it->second;
  if (t->args.empty()) return t;
  bool changed = false;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) {
    TermPtr r = replace_terms(a, m);
    changed |= (r.get() != a.get());
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  Term copy = *t;
  copy.args = std::move(args);
  return std::make_shared<Term>(std::move(copy));
}

bool contains_var(const TermPtr& t, const std::string& logic_var) {
  if (t->kind == TermKind::LogicVar && t->name == logic_var) return true;
  for (const auto& a : t->args)
    if (contains_var(a, logic_var)) return true;
  return false;
}

} // namespace sepveri
