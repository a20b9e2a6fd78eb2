#include "sepveri/entail.hpp"

#include "sepveri/normalize.hpp"
#include "sepveri/printer.hpp"

#include <algorithm>
#include <sstream>

namespace sepveri {

namespace {

bool is_pattern_var(const TermPtr& t) {
  return t->kind == TermKind::LogicVar && !t->name.empty() && t->name[0] == '?';
}

bool is_existential(const SymbolicHeap& right, const std::string& name) {
  for (const auto& b : right.exists)
    if (b.name == name) return true;
  return false;
}

bool contains_existential(const TermPtr& t, const SymbolicHeap& right) {
  if (t->kind == TermKind::LogicVar && is_existential(right, t->name)) return true;
  for (const auto& a : t->args)
    if (contains_existential(a, right)) return true;
  return false;
}

bool pure_has_existential(const PurePtr& p, const SymbolicHeap& right) {
  if (p->kind == PureKind::Cmp)
    return contains_existential(p->lhs, right) || contains_existential(p->rhs, right);
  for (const auto& s : p->sub)
    if (pure_has_existential(s, right)) return true;
  for (const auto& t : p->args)
    if (contains_existential(t, right)) return true;
  return false;
}

void drop_existential(SymbolicHeap& right, const std::string& name) {
  right.exists.erase(std::remove_if(right.exists.begin(), right.exists.end(),
                                    [&](const BoundVar& b) { return b.name == name; }),
                     right.exists.end());
}

void subst_right(SymbolicHeap& right, const TermMap& m) {
  for (auto& p : right.pure) p = subst_pure(p, m);
  for (auto& s : right.spatial) s = subst_spatial(s, m);
}

// First-order matching of a right-side term (may contain uninstantiated
// existentials) against a ground left-side term, modulo the left equalities.
bool match_term(const TermPtr& pat, const TermPtr& t, const SymbolicHeap& right, Congruence& cc,
                TermMap& binding) {
  if (pat->kind == TermKind::LogicVar && is_existential(right, pat->name)) {
    auto it = binding.find(pat->name);
    if (it != binding.end()) return cc.equal(it->second, t);
    binding[pat->name] = t;
    return true;
  }
  if (!contains_existential(pat, right)) return cc.equal(pat, t);
  if (pat->kind != t->kind) return false;
  switch (pat->kind) {
    case TermKind::FieldAddr:
      if (pat->name != t->name) return false;
      return match_term(pat->args[0], t->args[0], right, cc, binding);
    case TermKind::Index:
      return match_term(pat->args[0], t->args[0], right, cc, binding) &&
             match_term(pat->args[1], t->args[1], right, cc, binding);
    case TermKind::App: {
      if (pat->name != t->name || pat->args.size() != t->args.size()) return false;
      for (std::size_t i = 0; i < pat->args.size(); ++i)
        if (!match_term(pat->args[i], t->args[i], right, cc, binding)) return false;
      return true;
    }
    default:
      return false;
  }
}

Congruence left_congruence(const SymbolicHeap& left) {
  Congruence cc;
  for (const auto& p : left.pure) cc.add_hyp(p);
  return cc;
}

} // namespace

EntailmentGoal EntailmentGoal::make(const SymbolicHeap& left, const SymbolicHeap& right,
                                    FreshGen& fresh, int budget) {
  EntailmentGoal g;
  g.budget = budget;

  // reserve every free name on both sides; binder names stay when they do not
  // collide with anything else
  SymbolicHeap l = left;
  SymbolicHeap r = right;
  {
    std::set<std::string> names = all_names(l);
    for (const auto& b : l.exists) names.erase(b.name);
    std::set<std::string> rnames = all_names(r);
    for (const auto& b : r.exists) rnames.erase(b.name);
    names.insert(rnames.begin(), rnames.end());
    fresh.reserve_all(names);
  }

  // left existentials open as goal universals with collision-free names
  TermMap lrename;
  for (auto& b : l.exists) {
    std::string nn = fresh.fresh(b.name);
    if (nn != b.name) {
      lrename[b.name] = Term::logic_var(nn, b.sort);
      b.name = nn;
    }
  }
  if (!lrename.empty()) {
    for (auto& p : l.pure) p = subst_pure(p, lrename);
    for (auto& s : l.spatial) s = subst_spatial(s, lrename);
  }
  l.exists.clear();
  g.left = std::move(l);

  // right existentials keep their binder list, renamed apart
  TermMap rrename;
  for (auto& b : r.exists) {
    std::string nn = fresh.fresh(b.name);
    if (nn != b.name) {
      rrename[b.name] = Term::logic_var(nn, b.sort);
      b.name = nn;
    }
  }
  if (!rrename.empty()) subst_right(r, rrename);
  g.right = std::move(r);
  return g;
}

std::vector<Match> match_pattern(const Strategy& s, const EntailmentGoal& g, const LogicEnv& env) {
  (void)env;
  Congruence cc = left_congruence(g.left);
  std::vector<Match> out;

  std::function<bool(const TermPtr&, const TermPtr&, TermMap&)> pmatch =
      [&](const TermPtr& pat, const TermPtr& t, TermMap& binding) -> bool {
    if (is_pattern_var(pat)) {
      if (t->kind == TermKind::Undef) return false;
      auto it = binding.find(pat->name);
      if (it != binding.end()) return cc.equal(it->second, t);
      binding[pat->name] = t;
      return true;
    }
    bool ground = true;
    std::function<void(const TermPtr&)> scan = [&](const TermPtr& q) {
      if (is_pattern_var(q)) ground = false;
      for (const auto& a : q->args) scan(a);
    };
    scan(pat);
    if (ground) return cc.equal(pat, t);
    if (pat->kind != t->kind) return false;
    switch (pat->kind) {
      case TermKind::FieldAddr:
        if (pat->name != t->name) return false;
        return pmatch(pat->args[0], t->args[0], binding);
      case TermKind::Index:
        return pmatch(pat->args[0], t->args[0], binding) &&
               pmatch(pat->args[1], t->args[1], binding);
      case TermKind::App: {
        if (pat->name != t->name || pat->args.size() != t->args.size()) return false;
        for (std::size_t i = 0; i < pat->args.size(); ++i)
          if (!pmatch(pat->args[i], t->args[i], binding)) return false;
        return true;
      }
      default:
        return false;
    }
  };

  auto pure_matches = [&](const PurePtr& pat, const PurePtr& atom, TermMap& binding) {
    if (pat->kind != PureKind::Cmp || atom->kind != PureKind::Cmp) return false;
    if (pat->op != atom->op) return false;
    TermMap trial = binding;
    if (pmatch(pat->lhs, atom->lhs, trial) && pmatch(pat->rhs, atom->rhs, trial)) {
      binding = std::move(trial);
      return true;
    }
    return false;
  };

  auto spatial_matches = [&](const SpatialAtom& pat, const SpatialAtom& atom, TermMap& binding) {
    if (pat.kind != atom.kind) return false;
    TermMap trial = binding;
    if (pat.kind == SpatialKind::PointsTo) {
      if (!pmatch(pat.loc, atom.loc, trial)) return false;
      // a permission pattern (__undef value) matches any cell
      if (pat.value->kind != TermKind::Undef && !pmatch(pat.value, atom.value, trial))
        return false;
      binding = std::move(trial);
      return true;
    }
    if (pat.kind == SpatialKind::PredApp) {
      if (pat.pred != atom.pred || pat.args.size() != atom.args.size()) return false;
      for (std::size_t i = 0; i < pat.args.size(); ++i)
        if (!pmatch(pat.args[i], atom.args[i], trial)) return false;
      binding = std::move(trial);
      return true;
    }
    return false;
  };

  std::function<void(std::size_t, Match)> go = [&](std::size_t pi, Match m) {
    if (pi == s.patterns.size()) {
      for (const auto& p : s.patterns)
        for (const auto& b : p.exist_binders) {
          auto it = m.bindings.find("?" + b);
          if (it == m.bindings.end()) return;
          const TermPtr& t = it->second;
          if (t->kind != TermKind::LogicVar || !is_existential(g.right, t->name)) return;
        }
      out.push_back(std::move(m));
      return;
    }
    const StrategyPattern& pat = s.patterns[pi];
    const SymbolicHeap& side = pat.right ? g.right : g.left;
    if (pat.spatial) {
      for (std::size_t i = 0; i < side.spatial.size(); ++i) {
        bool taken = false;
        for (const auto& [key, idx] : m.slots)
          if (key.first == pat.right && !m.slot_is_pure.at(key) && idx == i) taken = true;
        if (taken) continue;
        Match next = m;
        if (spatial_matches(pat.atom, side.spatial[i], next.bindings)) {
          next.slots[{pat.right, pat.slot}] = i;
          next.slot_is_pure[{pat.right, pat.slot}] = false;
          go(pi + 1, std::move(next));
        }
      }
    } else {
      for (std::size_t i = 0; i < side.pure.size(); ++i) {
        bool taken = false;
        for (const auto& [key, idx] : m.slots)
          if (key.first == pat.right && m.slot_is_pure.at(key) && idx == i) taken = true;
        if (taken) continue;
        Match next = m;
        if (pure_matches(pat.pure, side.pure[i], next.bindings)) {
          next.slots[{pat.right, pat.slot}] = i;
          next.slot_is_pure[{pat.right, pat.slot}] = true;
          go(pi + 1, std::move(next));
        }
      }
    }
  };
  go(0, Match{});
  return out;
}

ApplyResult apply_strategy(const Strategy& s, const Match& m, const EntailmentGoal& g,
                           const LogicEnv& env, FreshGen& fresh, const SolverConfig& cfg) {
  ApplyResult res;
  res.goal = g;
  EntailmentGoal& out = res.goal;

  Congruence cc = left_congruence(g.left);

  // checks first; the action only runs when all of them pass
  for (const auto& ck : s.checks) {
    PurePtr p = subst_pure(ck.formula, m.bindings);
    switch (ck.kind) {
      case StrategyCheck::Kind::Infer: {
        ProveResult pr = prove_atom(g.left.pure, p, env, cfg);
        if (!pr.proved()) {
          res.status = ApplyStatus::CheckFailed;
          res.detail = "infer(" + print_pure(p) + ")";
          return res;
        }
        out.side_conditions.push_back(p);
        break;
      }
      case StrategyCheck::Kind::LeftAbsent:
      case StrategyCheck::Kind::RightAbsent: {
        const auto& atoms =
            ck.kind == StrategyCheck::Kind::LeftAbsent ? g.left.pure : g.right.pure;
        for (const auto& a : atoms) {
          bool present = pure_eq(a, p);
          if (!present && a->kind == PureKind::Cmp && p->kind == PureKind::Cmp &&
              a->op == p->op && cc.equal(a->lhs, p->lhs) && cc.equal(a->rhs, p->rhs))
            present = true;
          if (present) {
            res.status = ApplyStatus::CheckFailed;
            res.detail =
                (ck.kind == StrategyCheck::Kind::LeftAbsent ? "left_absent(" : "right_absent(") +
                print_pure(p) + ")";
            return res;
          }
        }
        break;
      }
    }
  }

  // erase matched slots first (the action is atomic), then run adds in order
  std::set<std::size_t> kill[2][2]; // [right][pure]
  for (const auto& op : s.ops) {
    if (op.kind != StrategyOp::Kind::LeftErase && op.kind != StrategyOp::Kind::RightErase)
      continue;
    bool right = op.kind == StrategyOp::Kind::RightErase;
    auto it = m.slots.find({right, op.slot});
    if (it == m.slots.end()) {
      res.status = ApplyStatus::SlotOutOfRange;
      res.detail = "slot " + std::to_string(op.slot);
      return res;
    }
    kill[right][m.slot_is_pure.at({right, op.slot})].insert(it->second);
  }
  auto filter_spatial = [](std::vector<SpatialAtom>& vec, const std::set<std::size_t>& k) {
    if (k.empty()) return;
    std::vector<SpatialAtom> keep;
    for (std::size_t i = 0; i < vec.size(); ++i)
      if (!k.count(i)) keep.push_back(vec[i]);
    vec = std::move(keep);
  };
  auto filter_pure = [](std::vector<PurePtr>& vec, const std::set<std::size_t>& k) {
    if (k.empty()) return;
    std::vector<PurePtr> keep;
    for (std::size_t i = 0; i < vec.size(); ++i)
      if (!k.count(i)) keep.push_back(vec[i]);
    vec = std::move(keep);
  };
  filter_spatial(out.left.spatial, kill[0][0]);
  filter_pure(out.left.pure, kill[0][1]);
  filter_spatial(out.right.spatial, kill[1][0]);
  filter_pure(out.right.pure, kill[1][1]);

  TermMap action_env = m.bindings;
  fresh.reserve_all(all_names(out.left));
  fresh.reserve_all(all_names(out.right));
  for (const auto& op : s.ops) {
    switch (op.kind) {
      case StrategyOp::Kind::LeftErase:
      case StrategyOp::Kind::RightErase:
        break;
      case StrategyOp::Kind::ForallAdd: {
        std::string nn = fresh.fresh(op.var);
        action_env[op.var] = Term::logic_var(nn);
        break;
      }
      case StrategyOp::Kind::RightExistAdd: {
        std::string nn = fresh.fresh(op.var);
        action_env[op.var] = Term::logic_var(nn);
        out.right.exists.push_back(BoundVar{nn, sort_unknown()});
        break;
      }
      case StrategyOp::Kind::LeftAdd:
      case StrategyOp::Kind::RightAdd: {
        SymbolicHeap& side = op.kind == StrategyOp::Kind::LeftAdd ? out.left : out.right;
        if (op.spatial) side.spatial.push_back(subst_spatial(op.atom, action_env));
        else side.pure.push_back(subst_pure(op.pure, action_env));
        break;
      }
      case StrategyOp::Kind::Instantiate: {
        auto it = action_env.find("?" + op.var);
        if (it == action_env.end()) {
          res.status = ApplyStatus::CheckFailed;
          res.detail = "instantiate target ?" + op.var + " unbound";
          return res;
        }
        const TermPtr& v = it->second;
        if (v->kind != TermKind::LogicVar || !is_existential(out.right, v->name)) {
          res.status = ApplyStatus::CheckFailed;
          res.detail = "instantiate target is not a right existential";
          return res;
        }
        TermPtr witness = subst_term(op.term, action_env);
        out.instantiation[v->name] = witness;
        drop_existential(out.right, v->name);
        subst_right(out.right, TermMap{{v->name, witness}});
        break;
      }
    }
  }

  auto n = normalize(out.left);
  if (n) {
    out.left = std::move(*n);
  } else {
    out.left.pure = {PureAtom::bool_lit(false)};
    out.left.spatial.clear();
  }
  std::vector<PurePtr> deduped;
  for (const auto& p : out.right.pure) {
    bool dup = false;
    for (const auto& q : deduped)
      if (pure_eq(p, q)) dup = true;
    if (!dup) deduped.push_back(p);
  }
  out.right.pure = std::move(deduped);

  out.trace.push_back(s.origin);
  return res;
}

namespace {

bool left_is_false(const SymbolicHeap& l) {
  for (const auto& p : l.pure)
    if (p->kind == PureKind::BoolLit && !p->bval) return true;
  return false;
}

struct PendingVC {
  PurePtr goal;
};

// One cancellation step; returns true when progress was made.
bool cancel_step(EntailmentGoal& g, std::vector<PendingVC>& pending, const LogicEnv& env) {
  Congruence cc = left_congruence(g.left);

  // a right equation v == t with v existential forces the witness
  for (std::size_t i = 0; i < g.right.pure.size(); ++i) {
    const PurePtr& p = g.right.pure[i];
    if (p->kind != PureKind::Cmp || p->op != CmpOp::Eq) continue;
    for (bool flip : {false, true}) {
      const TermPtr& a = flip ? p->rhs : p->lhs;
      const TermPtr& b = flip ? p->lhs : p->rhs;
      if (a->kind == TermKind::LogicVar && is_existential(g.right, a->name) &&
          !contains_existential(b, g.right)) {
        g.instantiation[a->name] = b;
        drop_existential(g.right, a->name);
        g.right.pure.erase(g.right.pure.begin() + i);
        subst_right(g.right, TermMap{{a->name, b}});
        return true;
      }
    }
  }

  for (std::size_t j = 0; j < g.right.spatial.size(); ++j) {
    const SpatialAtom& r = g.right.spatial[j];
    if (r.kind == SpatialKind::Emp) {
      g.right.spatial.erase(g.right.spatial.begin() + j);
      return true;
    }
    if (r.kind == SpatialKind::PointsTo) {
      for (std::size_t i = 0; i < g.left.spatial.size(); ++i) {
        const SpatialAtom& l = g.left.spatial[i];
        if (l.kind != SpatialKind::PointsTo) continue;
        TermMap binding;
        if (!match_term(r.loc, l.loc, g.right, cc, binding)) continue;
        bool ok = false;
        bool value_vc = false;
        if (r.value->kind == TermKind::Undef) {
          ok = true; // permission request: any owned cell satisfies it
        } else if (l.value->kind == TermKind::Undef) {
          ok = false; // an uninitialized cell provides no readable value
        } else if (match_term(r.value, l.value, g.right, cc, binding)) {
          ok = true;
        } else if (!contains_existential(r.value, g.right)) {
          ok = true;
          value_vc = true;
        }
        if (!ok) continue;
        if (value_vc) pending.push_back(PendingVC{PureAtom::eq(l.value, r.value)});
        g.left.spatial.erase(g.left.spatial.begin() + i);
        g.right.spatial.erase(g.right.spatial.begin() + j);
        for (const auto& [v, t] : binding) {
          g.instantiation[v] = t;
          drop_existential(g.right, v);
        }
        if (!binding.empty()) subst_right(g.right, binding);
        return true;
      }
    }
    if (r.kind == SpatialKind::PredApp) {
      const PredicateDef* def = env.find_pred(r.pred);
      for (std::size_t i = 0; i < g.left.spatial.size(); ++i) {
        const SpatialAtom& l = g.left.spatial[i];
        if (l.kind != SpatialKind::PredApp || l.pred != r.pred ||
            l.args.size() != r.args.size())
          continue;
        TermMap binding;
        std::vector<PurePtr> arg_vcs;
        bool ok = true;
        for (std::size_t k = 0; k < r.args.size() && ok; ++k) {
          bool addr_arg = def && k < def->params.size() && def->params[k].sort == sort_addr();
          TermMap trial = binding;
          if (match_term(r.args[k], l.args[k], g.right, cc, trial)) {
            binding = std::move(trial);
            continue;
          }
          if (addr_arg || contains_existential(r.args[k], g.right)) {
            ok = false;
            break;
          }
          arg_vcs.push_back(PureAtom::eq(l.args[k], r.args[k]));
        }
        if (!ok) continue;
        for (auto& vc : arg_vcs) pending.push_back(PendingVC{std::move(vc)});
        g.left.spatial.erase(g.left.spatial.begin() + i);
        g.right.spatial.erase(g.right.spatial.begin() + j);
        for (const auto& [v, t] : binding) {
          g.instantiation[v] = t;
          drop_existential(g.right, v);
        }
        if (!binding.empty()) subst_right(g.right, binding);
        return true;
      }
    }
  }
  return false;
}

} // namespace

SolveResult solve(const SymbolicHeap& left, const SymbolicHeap& right,
                  const std::vector<Strategy>& strategies, const LogicEnv& env, FreshGen& fresh,
                  const SolveOptions& opts, const SolverConfig& solver_cfg) {
  SolveResult res;

  auto nl = normalize(left);
  if (!nl) {
    res.status = SolveStatus::Success;
    res.vacuous = true;
    return res;
  }

  EntailmentGoal g = EntailmentGoal::make(*nl, right, fresh, opts.budget);

  std::vector<std::size_t> order(strategies.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (strategies[a].priority != strategies[b].priority)
      return strategies[a].priority < strategies[b].priority;
    return strategies[a].file_order < strategies[b].file_order;
  });

  std::vector<PendingVC> pending;

  auto finish_success = [&]() {
    res.status = SolveStatus::Success;
    res.frame = g.left.spatial;
    res.instantiation = g.instantiation;
    res.trace = g.trace;
    for (const auto& vc : pending) {
      SolveVC out;
      out.hyps = g.left.pure;
      out.goal = vc.goal;
      res.pure_vcs.push_back(std::move(out));
    }
    for (const auto& p : g.right.pure) {
      SolveVC out;
      out.hyps = g.left.pure;
      out.goal = p;
      out.has_existential = pure_has_existential(p, g.right);
      res.pure_vcs.push_back(std::move(out));
    }
    return res;
  };

  for (;;) {
    if (left_is_false(g.left)) {
      res.status = SolveStatus::Success;
      res.vacuous = true;
      res.trace = g.trace;
      res.instantiation = g.instantiation;
      return res;
    }

    while (cancel_step(g, pending, env)) {
    }

    if (g.right.spatial.empty() && (opts.frame_allowed || g.left.spatial.empty()))
      return finish_success();

    bool applied = false;
    for (std::size_t oi : order) {
      const Strategy& s = strategies[oi];
      auto matches = match_pattern(s, g, env);
      for (const auto& m : matches) {
        ApplyResult ar = apply_strategy(s, m, g, env, fresh, solver_cfg);
        if (ar.status == ApplyStatus::Applied) {
          g = std::move(ar.goal);
          applied = true;
          break;
        }
      }
      if (applied) break;
    }
    if (!applied) {
      res.status = SolveStatus::Stuck;
      res.residual = g;
      res.trace = g.trace;
      return res;
    }
    if (--g.budget < 0) {
      res.status = SolveStatus::BudgetExceeded;
      res.residual = g;
      res.trace = g.trace;
      return res;
    }
  }
}

std::string print_goal(const EntailmentGoal& g) {
  std::ostringstream os;
  os << print_heap(g.left) << " |-- ";
  if (!g.right.exists.empty()) {
    os << "exists";
    for (const auto& b : g.right.exists) os << " " << b.name;
    os << ", ";
  }
  SymbolicHeap r = g.right;
  r.exists.clear();
  os << print_heap(r);
  return os.str();
}

} // namespace sepveri
