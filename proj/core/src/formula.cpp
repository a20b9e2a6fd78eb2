#include "sepveri/formula.hpp"

#include <algorithm>

namespace sepveri {

CmpOp cmp_negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return CmpOp::Eq;
}

const char* cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

PurePtr PureAtom::cmp(CmpOp op, TermPtr l, TermPtr r) {
  PureAtom p;
  p.kind = PureKind::Cmp;
  p.op = op;
  p.lhs = std::move(l);
  p.rhs = std::move(r);
  return std::make_shared<PureAtom>(std::move(p));
}

PurePtr PureAtom::negate(PurePtr q) {
  if (q->kind == PureKind::Cmp) return cmp(cmp_negate(q->op), q->lhs, q->rhs);
  if (q->kind == PureKind::Not) return q->sub[0];
  if (q->kind == PureKind::BoolLit) return bool_lit(!q->bval);
  PureAtom p;
  p.kind = PureKind::Not;
  p.sub = {std::move(q)};
  return std::make_shared<PureAtom>(std::move(p));
}

PurePtr PureAtom::conj(std::vector<PurePtr> ps) {
  if (ps.size() == 1) return ps[0];
  PureAtom p;
  p.kind = PureKind::And;
  p.sub = std::move(ps);
  return std::make_shared<PureAtom>(std::move(p));
}

PurePtr PureAtom::disj(std::vector<PurePtr> ps) {
  if (ps.size() == 1) return ps[0];
  PureAtom p;
  p.kind = PureKind::Or;
  p.sub = std::move(ps);
  return std::make_shared<PureAtom>(std::move(p));
}

PurePtr PureAtom::pred_app(std::string name, std::vector<TermPtr> args) {
  PureAtom p;
  p.kind = PureKind::PredApp;
  p.pred = std::move(name);
  p.args = std::move(args);
  return std::make_shared<PureAtom>(std::move(p));
}

PurePtr PureAtom::bool_lit(bool b) {
  PureAtom p;
  p.kind = PureKind::BoolLit;
  p.bval = b;
  return std::make_shared<PureAtom>(std::move(p));
}

int pure_cmp(const PurePtr& a, const PurePtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case PureKind::Cmp: {
      if (a->op != b->op) return a->op < b->op ? -1 : 1;
      int c = term_cmp(a->lhs, b->lhs);
      if (c != 0) return c;
      return term_cmp(a->rhs, b->rhs);
    }
    case PureKind::BoolLit:
      if (a->bval != b->bval) return a->bval ? 1 : -1;
      return 0;
    case PureKind::PredApp: {
      int c = a->pred.compare(b->pred);
      if (c != 0) return c < 0 ? -1 : 1;
      if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        c = term_cmp(a->args[i], b->args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    default: {
      if (a->sub.size() != b->sub.size()) return a->sub.size() < b->sub.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->sub.size(); ++i) {
        int c = pure_cmp(a->sub[i], b->sub[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
}

bool pure_eq(const PurePtr& a, const PurePtr& b) { return pure_cmp(a, b) == 0; }

SpatialAtom SpatialAtom::emp() { return SpatialAtom{}; }

SpatialAtom SpatialAtom::points_to(TermPtr loc, TermPtr value) {
  SpatialAtom s;
  s.kind = SpatialKind::PointsTo;
  s.loc = std::move(loc);
  s.value = std::move(value);
  return s;
}

SpatialAtom SpatialAtom::has_permission(TermPtr loc) {
  return points_to(std::move(loc), Term::undef());
}

SpatialAtom SpatialAtom::pred_app(std::string name, std::vector<TermPtr> args) {
  SpatialAtom s;
  s.kind = SpatialKind::PredApp;
  s.pred = std::move(name);
  s.args = std::move(args);
  return s;
}

bool SpatialAtom::is_permission() const {
  return kind == SpatialKind::PointsTo && value->kind == TermKind::Undef;
}

int spatial_cmp(const SpatialAtom& a, const SpatialAtom& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case SpatialKind::Emp: return 0;
    case SpatialKind::PointsTo: {
      int c = term_cmp(a.loc, b.loc);
      if (c != 0) return c;
      return term_cmp(a.value, b.value);
    }
    case SpatialKind::PredApp: {
      int c = a.pred.compare(b.pred);
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        c = term_cmp(a.args[i], b.args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

bool spatial_eq(const SpatialAtom& a, const SpatialAtom& b) { return spatial_cmp(a, b) == 0; }

void SymbolicHeap::collect_vars(std::set<std::string>& lv, std::set<std::string>& pv) const {
  std::function<void(const PurePtr&)> walk_pure = [&](const PurePtr& p) {
    if (p->kind == PureKind::Cmp) {
      sepveri::collect_vars(p->lhs, lv, pv);
      sepveri::collect_vars(p->rhs, lv, pv);
    }
    for (const auto& s : p->sub) walk_pure(s);
    for (const auto& t : p->args) sepveri::collect_vars(t, lv, pv);
  };
  for (const auto& p : pure) walk_pure(p);
  for (const auto& s : spatial) {
    if (s.kind == SpatialKind::PointsTo) {
      sepveri::collect_vars(s.loc, lv, pv);
      sepveri::collect_vars(s.value, lv, pv);
    }
    for (const auto& t : s.args) sepveri::collect_vars(t, lv, pv);
  }
}

std::set<std::string> SymbolicHeap::free_logic_vars() const {
  std::set<std::string> lv, pv;
  collect_vars(lv, pv);
  for (const auto& b : exists) lv.erase(b.name);
  return lv;
}

bool heap_eq(const SymbolicHeap& a, const SymbolicHeap& b) {
  if (a.exists.size() != b.exists.size() || a.pure.size() != b.pure.size() ||
      a.spatial.size() != b.spatial.size())
    return false;
  for (std::size_t i = 0; i < a.exists.size(); ++i)
    if (a.exists[i].name != b.exists[i].name) return false;
  for (std::size_t i = 0; i < a.pure.size(); ++i)
    if (!pure_eq(a.pure[i], b.pure[i])) return false;
  for (std::size_t i = 0; i < a.spatial.size(); ++i)
    if (!spatial_eq(a.spatial[i], b.spatial[i])) return false;
  return true;
}

Assertion Assertion::single(SymbolicHeap h, std::optional<std::string> name) {
  Assertion a;
  a.branches.push_back(Branch{std::move(name), std::move(h)});
  return a;
}

const Branch* Assertion::find(const std::string& name) const {
  for (const auto& b : branches)
    if (b.name && *b.name == name) return &b;
  return nullptr;
}

std::string FreshGen::fresh(const std::string& base) {
  // strip a trailing digit suffix so y0 -> y as the stem
  std::string stem = base;
  while (!stem.empty() && isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "v";
  if (!used_.count(base)) {
    used_.insert(base);
    return base;
  }
  for (int i = 0;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!used_.count(cand)) {
      used_.insert(cand);
      return cand;
    }
  }
}

std::string FreshGen::fresh_primed(const std::string& base) {
  std::string cand = base + "'";
  while (used_.count(cand)) cand += "'";
  used_.insert(cand);
  return cand;
}

std::set<std::string> all_names(const SymbolicHeap& h) {
  std::set<std::string> lv, pv;
  h.collect_vars(lv, pv);
  for (const auto& b : h.exists) lv.insert(b.name);
  lv.insert(pv.begin(), pv.end());
  return lv;
}

std::set<std::string> all_names(const Assertion& a) {
  std::set<std::string> out;
  for (const auto& b : a.branches) {
    auto n = all_names(b.heap);
    out.insert(n.begin(), n.end());
  }
  return out;
}

TermPtr subst_term(const TermPtr& t, const TermMap& m) {
  if (t->kind == TermKind::LogicVar) {
    auto it = m.find(t->name);
    if (it != m.end()) return it->second;
    return t;
  }
  if (t->args.empty()) return t;
  bool changed = false;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) {
    TermPtr r = subst_term(a, m);
    changed |= (r.get() != a.get());
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  Term copy = *t;
  copy.args = std::move(args);
  return std::make_shared<Term>(std::move(copy));
}

PurePtr subst_pure(const PurePtr& p, const TermMap& m) {
  PureAtom copy = *p;
  if (p->kind == PureKind::Cmp) {
    copy.lhs = subst_term(p->lhs, m);
    copy.rhs = subst_term(p->rhs, m);
  }
  for (auto& s : copy.sub) s = subst_pure(s, m);
  for (auto& t : copy.args) t = subst_term(t, m);
  return std::make_shared<PureAtom>(std::move(copy));
}

SpatialAtom subst_spatial(const SpatialAtom& s, const TermMap& m) {
  SpatialAtom copy = s;
  if (s.kind == SpatialKind::PointsTo) {
    copy.loc = subst_term(s.loc, m);
    copy.value = subst_term(s.value, m);
  }
  for (auto& t : copy.args) t = subst_term(t, m);
  return copy;
}

SymbolicHeap substitute(const SymbolicHeap& h, const TermMap& m, FreshGen* fresh) {
  // Capture avoidance: rename bound variables that occur free in the range.
  std::set<std::string> range_vars;
  for (const auto& [k, v] : m) {
    std::set<std::string> pv;
    collect_vars(v, range_vars, pv);
  }
  TermMap full = m;
  FreshGen local;
  if (!fresh) {
    local.reserve_all(all_names(h));
    local.reserve_all(range_vars);
    for (const auto& [k, v] : m) local.reserve(k);
    fresh = &local;
  }
  SymbolicHeap out;
  out.exists = h.exists;
  for (auto& b : out.exists) {
    full.erase(b.name); // bound variables shadow the substitution
    if (range_vars.count(b.name)) {
      std::string nn = fresh->fresh_primed(b.name);
      full[b.name] = Term::logic_var(nn, b.sort);
      b.name = nn;
    }
  }
  for (const auto& p : h.pure) out.pure.push_back(subst_pure(p, full));
  for (const auto& s : h.spatial) out.spatial.push_back(subst_spatial(s, full));
  return out;
}

Assertion substitute(const Assertion& a, const TermMap& m, FreshGen* fresh) {
  Assertion out;
  for (const auto& b : a.branches)
    out.branches.push_back(Branch{b.name, substitute(b.heap, m, fresh)});
  return out;
}

namespace {

TermPtr subst_pv_term(const TermPtr& t, const std::string& var, const TermPtr& to,
                      bool include_at_pre) {
  if (t->kind == TermKind::ProgVar && t->name == var && (include_at_pre || !t->at_pre)) return to;
  if (t->args.empty()) return t;
  Term copy = *t;
  for (auto& a : copy.args) a = subst_pv_term(a, var, to, include_at_pre);
  return std::make_shared<Term>(std::move(copy));
}

} // namespace

SymbolicHeap subst_prog_var(const SymbolicHeap& h, const std::string& var, const TermPtr& to,
                            bool include_at_pre) {
  std::function<PurePtr(const PurePtr&)> walk = [&](const PurePtr& p) -> PurePtr {
    PureAtom copy = *p;
    if (p->kind == PureKind::Cmp) {
      copy.lhs = subst_pv_term(p->lhs, var, to, include_at_pre);
      copy.rhs = subst_pv_term(p->rhs, var, to, include_at_pre);
    }
    for (auto& s : copy.sub) s = walk(s);
    for (auto& t : copy.args) t = subst_pv_term(t, var, to, include_at_pre);
    return std::make_shared<PureAtom>(std::move(copy));
  };
  SymbolicHeap out;
  out.exists = h.exists;
  for (const auto& p : h.pure) out.pure.push_back(walk(p));
  for (const auto& s : h.spatial) {
    SpatialAtom copy = s;
    if (s.kind == SpatialKind::PointsTo) {
      copy.loc = subst_pv_term(s.loc, var, to, include_at_pre);
      copy.value = subst_pv_term(s.value, var, to, include_at_pre);
    }
    for (auto& t : copy.args) t = subst_pv_term(t, var, to, include_at_pre);
    out.spatial.push_back(std::move(copy));
  }
  return out;
}

} // namespace sepveri
