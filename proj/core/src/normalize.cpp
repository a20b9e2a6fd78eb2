#include "sepveri/normalize.hpp"

#include <algorithm>
#include <cassert>

namespace sepveri {

namespace {

bool is_ctor(const TermPtr& t) {
  return t->kind == TermKind::App && t->app_kind == AppKind::Ctor;
}

// Union-find over terms, representative = least member in the term order.
class Classes {
public:
  TermPtr find(const TermPtr& t) {
    auto it = parent_.find(t);
    if (it == parent_.end()) return t;
    TermPtr root = find(it->second);
    parent_[t] = root;
    return root;
  }

  void merge(const TermPtr& a, const TermPtr& b) {
    TermPtr ra = find(a), rb = find(b);
    if (term_eq(ra, rb)) return;
    if (term_cmp(ra, rb) < 0)
      parent_[rb] = ra;
    else
      parent_[ra] = rb;
  }

  const std::map<TermPtr, TermPtr, TermLess>& parents() const { return parent_; }

private:
  std::map<TermPtr, TermPtr, TermLess> parent_;
};

std::optional<bool> eval_cmp_ground(CmpOp op, const TermPtr& l, const TermPtr& r) {
  if (l->kind == TermKind::IntLit && r->kind == TermKind::IntLit) {
    auto a = l->int_val, b = r->int_val;
    switch (op) {
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      case CmpOp::Lt: return a < b;
      case CmpOp::Le: return a <= b;
      case CmpOp::Gt: return a > b;
      case CmpOp::Ge: return a >= b;
    }
  }
  if (l->kind == TermKind::Null && r->kind == TermKind::Null) {
    if (op == CmpOp::Eq) return true;
    if (op == CmpOp::Ne) return false;
  }
  if (op == CmpOp::Eq || op == CmpOp::Ne) {
    if (is_ctor(l) && is_ctor(r) && l->name != r->name) return op == CmpOp::Ne;
    if (term_eq(l, r)) return op == CmpOp::Eq;
  }
  return std::nullopt;
}

} // namespace

std::optional<bool> eval_pure_ground(const PurePtr& p) {
  switch (p->kind) {
    case PureKind::BoolLit: return p->bval;
    case PureKind::Cmp: return eval_cmp_ground(p->op, p->lhs, p->rhs);
    case PureKind::Not: {
      auto v = eval_pure_ground(p->sub[0]);
      if (v) return !*v;
      return std::nullopt;
    }
    case PureKind::And: {
      bool all = true;
      for (const auto& s : p->sub) {
        auto v = eval_pure_ground(s);
        if (!v) all = false;
        else if (!*v) return false;
      }
      if (all) return true;
      return std::nullopt;
    }
    case PureKind::Or: {
      bool all = true;
      for (const auto& s : p->sub) {
        auto v = eval_pure_ground(s);
        if (!v) all = false;
        else if (*v) return true;
      }
      if (all) return false;
      return std::nullopt;
    }
    case PureKind::PredApp: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<SymbolicHeap> normalize(const SymbolicHeap& input) {
  SymbolicHeap h = input;

  // Bound variables must be distinct from free variables and from each other.
  {
    std::set<std::string> lv, pv;
    h.collect_vars(lv, pv);
    std::set<std::string> bound;
    for (const auto& b : h.exists) bound.insert(b.name);
    std::set<std::string> free_names = pv;
    for (const auto& v : lv)
      if (!bound.count(v)) free_names.insert(v);
    FreshGen fg;
    fg.reserve_all(lv);
    fg.reserve_all(pv);
    TermMap renames;
    std::set<std::string> seen;
    for (auto& b : h.exists) {
      if (free_names.count(b.name) || seen.count(b.name)) {
        std::string nn = fg.fresh_primed(b.name);
        renames[b.name] = Term::logic_var(nn, b.sort);
        b.name = nn;
      }
      seen.insert(b.name);
    }
    if (!renames.empty()) {
      for (auto& p : h.pure) p = subst_pure(p, renames);
      for (auto& s : h.spatial) s = subst_spatial(s, renames);
    }
  }

  std::set<std::string> existential;
  for (const auto& b : h.exists) existential.insert(b.name);

  for (int pass = 0; pass < 32; ++pass) {
    const SymbolicHeap snapshot = h;
    bool changed = false;

    // 1. Flatten conjunctions, push negations, evaluate ground atoms,
    //    decompose constructor equalities.
    std::vector<PurePtr> work;
    std::vector<PurePtr> atoms;
    for (auto it = h.pure.rbegin(); it != h.pure.rend(); ++it) work.push_back(*it);
    while (!work.empty()) {
      PurePtr p = work.back();
      work.pop_back();
      if (p->kind == PureKind::And) {
        for (auto it = p->sub.rbegin(); it != p->sub.rend(); ++it) work.push_back(*it);
        changed = true;
        continue;
      }
      if (p->kind == PureKind::Not) {
        PurePtr inner = p->sub[0];
        if (inner->kind == PureKind::Cmp || inner->kind == PureKind::Not ||
            inner->kind == PureKind::BoolLit) {
          work.push_back(PureAtom::negate(inner));
          changed = true;
          continue;
        }
      }
      auto v = eval_pure_ground(p);
      if (v) {
        if (!*v) return std::nullopt;
        changed = true;
        continue; // true atoms dropped
      }
      if (p->kind == PureKind::Or) {
        // drop ground-false disjuncts
        std::vector<PurePtr> keep;
        for (const auto& s : p->sub) {
          auto sv = eval_pure_ground(s);
          if (sv && !*sv) continue;
          keep.push_back(s);
        }
        if (keep.empty()) return std::nullopt;
        if (keep.size() == 1) {
          work.push_back(keep[0]);
          changed = true;
          continue;
        }
        if (keep.size() != p->sub.size()) {
          work.push_back(PureAtom::disj(keep));
          changed = true;
          continue;
        }
      }
      if (p->kind == PureKind::Cmp && p->op == CmpOp::Eq && is_ctor(p->lhs) && is_ctor(p->rhs)) {
        if (p->lhs->name != p->rhs->name) return std::nullopt; // clash
        for (std::size_t i = 0; i < p->lhs->args.size(); ++i)
          work.push_back(PureAtom::eq(p->lhs->args[i], p->rhs->args[i]));
        changed = true;
        continue;
      }
      if (p->kind == PureKind::Cmp && p->op == CmpOp::Ne && term_eq(p->lhs, p->rhs))
        return std::nullopt;
      atoms.push_back(p);
    }

    // 2. Equality classes and the rewrite map.
    Classes classes;
    for (const auto& p : atoms)
      if (p->kind == PureKind::Cmp && p->op == CmpOp::Eq) classes.merge(p->lhs, p->rhs);

    TermMap rewrite; // logic vars (by name)
    std::map<std::string, TermPtr> prog_rewrite;
    for (const auto& [t, _] : classes.parents()) {
      TermPtr rep = classes.find(t);
      if (term_eq(t, rep)) continue;
      if (t->kind == TermKind::LogicVar) {
        if (!contains_var(rep, t->name)) rewrite[t->name] = rep;
      } else if (t->kind == TermKind::ProgVar && !t->at_pre) {
        // guard against x == f(x)-style cycles through program variables
        std::set<std::string> lv, pv;
        collect_vars(rep, lv, pv);
        if (!pv.count(t->name)) prog_rewrite[t->name] = rep;
      }
    }

    if (!rewrite.empty() || !prog_rewrite.empty()) changed = true;

    std::function<TermPtr(const TermPtr&)> rw_term = [&](const TermPtr& t) -> TermPtr {
      if (t->kind == TermKind::LogicVar) {
        auto it2 = rewrite.find(t->name);
        return it2 != rewrite.end() ? it2->second : t;
      }
      if (t->kind == TermKind::ProgVar && !t->at_pre) {
        auto it2 = prog_rewrite.find(t->name);
        if (it2 != prog_rewrite.end()) return it2->second;
        return t;
      }
      if (t->args.empty()) return t;
      Term copy = *t;
      for (auto& a : copy.args) a = rw_term(a);
      return std::make_shared<Term>(std::move(copy));
    };
    std::function<PurePtr(const PurePtr&)> rw_pure = [&](const PurePtr& p) -> PurePtr {
      PureAtom copy = *p;
      if (p->kind == PureKind::Cmp) {
        copy.lhs = rw_term(p->lhs);
        copy.rhs = rw_term(p->rhs);
      }
      for (auto& s : copy.sub) s = rw_pure(s);
      for (auto& t : copy.args) t = rw_term(t);
      return std::make_shared<PureAtom>(std::move(copy));
    };
    auto rw_spatial = [&](const SpatialAtom& s) {
      SpatialAtom copy = s;
      if (s.kind == SpatialKind::PointsTo) {
        copy.loc = rw_term(s.loc);
        copy.value = rw_term(s.value);
      }
      for (auto& t : copy.args) t = rw_term(t);
      return copy;
    };

    // Restriction of the rewrite to existential variables only (used to keep
    // the original statement of free-variable equalities readable).
    TermMap ex_rewrite;
    for (const auto& [v, rep] : rewrite)
      if (existential.count(v)) ex_rewrite[v] = rep;

    // 3. Rewrite atoms; equalities that collapse to t == t keep their original
    //    free-variable statement (they define the class); fully-existential
    //    ones are eliminated together with their binder.
    std::vector<PurePtr> rewritten;
    for (const auto& p : atoms) {
      PurePtr q = rw_pure(p);
      if (q->kind == PureKind::Cmp && q->op == CmpOp::Eq && term_eq(q->lhs, q->rhs)) {
        if (!pure_eq(p, q)) {
          PurePtr kept = subst_pure(p, ex_rewrite);
          if (!(kept->kind == PureKind::Cmp && term_eq(kept->lhs, kept->rhs)))
            rewritten.push_back(kept);
        }
        continue;
      }
      auto v = eval_pure_ground(q);
      if (v) {
        if (!*v) return std::nullopt;
        continue;
      }
      if (q->kind == PureKind::Cmp && q->op == CmpOp::Ne && term_eq(q->lhs, q->rhs))
        return std::nullopt;
      rewritten.push_back(q);
    }

    // 4. Dedupe, preserving first occurrence.
    std::vector<PurePtr> deduped;
    for (const auto& p : rewritten) {
      bool dup = false;
      for (const auto& q : deduped)
        if (pure_eq(p, q)) {
          dup = true;
          break;
        }
      if (!dup) deduped.push_back(p);
      else changed = true;
    }
    h.pure = std::move(deduped);

    // 5. Spatial part: rewrite, drop emp, detect duplicate cells and
    //    null dereferences.
    std::vector<SpatialAtom> spatial;
    for (const auto& s : h.spatial) {
      if (s.kind == SpatialKind::Emp) {
        changed = true;
        continue;
      }
      spatial.push_back(rw_spatial(s));
    }
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      if (spatial[i].kind != SpatialKind::PointsTo) continue;
      TermPtr base = spatial[i].loc;
      while (base->kind == TermKind::FieldAddr || base->kind == TermKind::Index)
        base = base->args[0];
      if (base->kind == TermKind::Null) return std::nullopt;
      for (std::size_t j = i + 1; j < spatial.size(); ++j) {
        if (spatial[j].kind != SpatialKind::PointsTo) continue;
        if (term_eq(spatial[i].loc, spatial[j].loc)) return std::nullopt;
      }
    }
    h.spatial = std::move(spatial);

    // 6. Drop eliminated / unused existentials.
    std::set<std::string> lv, pv;
    h.collect_vars(lv, pv);
    std::vector<BoundVar> keep;
    for (const auto& b : h.exists) {
      if (lv.count(b.name)) keep.push_back(b);
      else changed = true;
    }
    h.exists = std::move(keep);
    existential.clear();
    for (const auto& b : h.exists) existential.insert(b.name);

    if (!changed || heap_eq(h, snapshot)) break;
  }
  return h;
}

Assertion normalize_assertion(const Assertion& a) {
  Assertion out;
  for (const auto& b : a.branches) {
    auto n = normalize(b.heap);
    if (n) out.branches.push_back(Branch{b.name, std::move(*n)});
  }
  return out;
}

Assertion unfold(const SymbolicHeap& h, std::size_t atom_index, const PredTable& preds,
                 FreshGen& fresh) {
  assert(atom_index < h.spatial.size());
  const SpatialAtom& atom = h.spatial[atom_index];
  assert(atom.kind == SpatialKind::PredApp);
  auto it = preds.find(atom.pred);
  assert(it != preds.end());
  const PredicateDef& def = it->second;
  assert(def.params.size() == atom.args.size());

  fresh.reserve_all(all_names(h));

  Assertion out;
  for (const auto& disjunct : def.body.branches) {
    // bind parameters, freshen the disjunct's existentials
    TermMap sub;
    for (std::size_t i = 0; i < def.params.size(); ++i)
      sub[def.params[i].name] = atom.args[i];
    SymbolicHeap body = disjunct.heap;
    FreshGen local = fresh;
    std::vector<BoundVar> fresh_bound;
    for (const auto& bv : body.exists) {
      std::string nn = local.fresh(bv.name);
      sub[bv.name] = Term::logic_var(nn, bv.sort);
      fresh_bound.push_back(BoundVar{nn, bv.sort});
    }
    body.exists.clear();
    SymbolicHeap inst = substitute(body, sub);
    inst.exists = fresh_bound;

    // Context pure atoms first, then the unfolded body, then the untouched
    // context cells; the body's atoms sit where the predicate atom was.
    SymbolicHeap result;
    result.exists = h.exists;
    result.exists.insert(result.exists.end(), inst.exists.begin(), inst.exists.end());
    result.pure = inst.pure;
    for (const auto& p : h.pure) result.pure.push_back(p);
    for (std::size_t i = 0; i < atom_index; ++i) result.spatial.push_back(h.spatial[i]);
    result.spatial.insert(result.spatial.end(), inst.spatial.begin(), inst.spatial.end());
    for (std::size_t i = atom_index + 1; i < h.spatial.size(); ++i)
      result.spatial.push_back(h.spatial[i]);

    auto n = normalize(result);
    if (n) out.branches.push_back(Branch{std::nullopt, std::move(*n)});
  }
  return out;
}

} // namespace sepveri
