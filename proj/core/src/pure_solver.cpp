#include "sepveri/pure_solver.hpp"

#include "sepveri/normalize.hpp"

namespace sepveri {

namespace {

// Builds sum(coeffs*var) + constant from a term. Non-linear and uninterpreted
// subterms become opaque columns keyed by congruence class, so congruent
// occurrences share a column. Sets `nonlinear` when a variable product is
// abstracted.
struct Linearizer {
  Congruence& cc;
  bool nonlinear = false;

  struct Lin {
    std::map<int, __int128> coeffs;
    __int128 constant = 0;
  };

  Lin opaque(const TermPtr& t) {
    Lin l;
    auto k = cc.known_int(t);
    if (k) {
      l.constant = *k;
      return l;
    }
    l.coeffs[cc.class_id(t)] = 1;
    return l;
  }

  Lin run(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::IntLit: {
        Lin l;
        l.constant = t->int_val;
        return l;
      }
      case TermKind::App: {
        if (t->app_kind != AppKind::Builtin) return opaque(t);
        const std::string& op = t->name;
        if (op == "neg") {
          Lin a = run(t->args[0]);
          Lin l;
          l.constant = -a.constant;
          for (auto& [v, c] : a.coeffs) l.coeffs[v] = -c;
          return l;
        }
        if (op == "+" || op == "-") {
          Lin a = run(t->args[0]);
          Lin b = run(t->args[1]);
          Lin l = a;
          __int128 sign = op == "+" ? 1 : -1;
          l.constant += sign * b.constant;
          for (auto& [v, c] : b.coeffs) l.coeffs[v] += sign * c;
          return l;
        }
        if (op == "*") {
          Lin a = run(t->args[0]);
          Lin b = run(t->args[1]);
          if (a.coeffs.empty()) {
            Lin l;
            l.constant = a.constant * b.constant;
            for (auto& [v, c] : b.coeffs) l.coeffs[v] = a.constant * c;
            return l;
          }
          if (b.coeffs.empty()) {
            Lin l;
            l.constant = a.constant * b.constant;
            for (auto& [v, c] : a.coeffs) l.coeffs[v] = b.constant * c;
            return l;
          }
          nonlinear = true;
          return opaque(t);
        }
        // division, modulo and bit operations stay opaque
        return opaque(t);
      }
      default:
        return opaque(t);
    }
  }
};

bool int_comparable(const PurePtr& p) {
  return p->kind == PureKind::Cmp;
}

// hyps && extra && cmp(op, l, r) translated into the system (strict
// comparisons tightened over the integers).
void add_cmp(LinearSystem& sys, Linearizer& lin, CmpOp op, const TermPtr& l, const TermPtr& r) {
  Linearizer::Lin a = lin.run(l);
  Linearizer::Lin b = lin.run(r);
  // normal form: a - b (op) 0
  std::map<int, __int128> coeffs = a.coeffs;
  for (auto& [v, c] : b.coeffs) coeffs[v] -= c;
  __int128 k = a.constant - b.constant;
  switch (op) {
    case CmpOp::Le: sys.add_le(coeffs, k); break;
    case CmpOp::Lt: sys.add_le(coeffs, k + 1); break;
    case CmpOp::Ge: {
      std::map<int, __int128> neg;
      for (auto& [v, c] : coeffs) neg[v] = -c;
      sys.add_le(neg, -k);
      break;
    }
    case CmpOp::Gt: {
      std::map<int, __int128> neg;
      for (auto& [v, c] : coeffs) neg[v] = -c;
      sys.add_le(neg, -k + 1);
      break;
    }
    case CmpOp::Eq: sys.add_eq(coeffs, k); break;
    case CmpOp::Ne: break; // disequalities are congruence-only by design
  }
}

struct GoalOutcome {
  bool proved = false;
  bool blowup = false;
  bool nonlinear = false;
  std::string route;
};

// Tries to refute hyps && negation-of-goal with FME.
GoalOutcome fme_refute(const std::vector<PurePtr>& hyps, CmpOp neg_op, const TermPtr& l,
                       const TermPtr& r, Congruence& cc, const SolverConfig& cfg) {
  GoalOutcome out;
  Linearizer lin{cc};
  LinearSystem sys;
  std::function<void(const PurePtr&)> add_hyp = [&](const PurePtr& p) {
    switch (p->kind) {
      case PureKind::Cmp:
        if (p->op != CmpOp::Ne) add_cmp(sys, lin, p->op, p->lhs, p->rhs);
        return;
      case PureKind::And:
        for (const auto& s : p->sub) add_hyp(s);
        return;
      case PureKind::Not:
        if (p->sub[0]->kind == PureKind::Cmp) add_hyp(PureAtom::negate(p->sub[0]));
        return;
      default: return; // Or / PredApp hypotheses do not join the linear part
    }
  };
  for (const auto& h : hyps) add_hyp(h);
  if (neg_op != CmpOp::Ne) add_cmp(sys, lin, neg_op, l, r);
  else {
    // negated equality is handled by the caller as two strict runs
  }
  FmeResult fr = fme_decide(sys, cfg.fme_max_constraints);
  out.nonlinear = lin.nonlinear;
  if (fr.status == FmeStatus::Unsat) {
    out.proved = true;
    out.route = "fme";
  } else if (fr.status == FmeStatus::Blowup) {
    out.blowup = true;
  }
  return out;
}

} // namespace

ProveResult prove_atom(const std::vector<PurePtr>& hyps, const PurePtr& goal,
                       const LogicEnv& env, const SolverConfig& cfg) {
  PureVC vc;
  vc.hyps = hyps;
  vc.goal = goal;
  return prove(vc, env, cfg);
}

ProveResult prove(const PureVC& vc, const LogicEnv& env, const SolverConfig& cfg) {
  ProveResult res;

  // rewrite with declared pure-function equations
  auto rw_pure = [&](const PurePtr& p) -> PurePtr {
    std::function<PurePtr(const PurePtr&)> go = [&](const PurePtr& q) -> PurePtr {
      PureAtom copy = *q;
      if (q->kind == PureKind::Cmp) {
        copy.lhs = rewrite_with_equations(q->lhs, env);
        copy.rhs = rewrite_with_equations(q->rhs, env);
      }
      for (auto& s : copy.sub) s = go(s);
      for (auto& t : copy.args) t = rewrite_with_equations(t, env);
      return std::make_shared<PureAtom>(std::move(copy));
    };
    return go(p);
  };

  std::vector<PurePtr> hyps;
  hyps.reserve(vc.hyps.size());
  for (const auto& h : vc.hyps) hyps.push_back(rw_pure(h));
  PurePtr goal = rw_pure(vc.goal);

  // ground goal?
  if (auto g = eval_pure_ground(goal); g && *g) {
    res.status = ProveStatus::Proved;
    res.reason = "ground";
    return res;
  }

  Congruence cc;
  for (const auto& h : hyps) cc.add_hyp(h);

  if (cc.contradictory()) {
    res.status = ProveStatus::Proved;
    res.reason = "hyps-contradictory";
    return res;
  }

  // try FME on the bare hypotheses for arithmetic contradictions
  {
    GoalOutcome hy = fme_refute(hyps, CmpOp::Ne, nullptr, nullptr, cc, cfg);
    // neg_op Ne with null terms adds nothing; Unsat means hyps alone clash
    if (hy.proved) {
      res.status = ProveStatus::Proved;
      res.reason = "hyps-contradictory";
      return res;
    }
  }

  std::function<ProveResult(const PurePtr&)> prove_goal = [&](const PurePtr& g) -> ProveResult {
    ProveResult r;
    if (auto gv = eval_pure_ground(g); gv && *gv) {
      r.status = ProveStatus::Proved;
      r.reason = "ground";
      return r;
    }
    if (cc.entails_atom(g)) {
      r.status = ProveStatus::Proved;
      r.reason = "congruence";
      return r;
    }
    switch (g->kind) {
      case PureKind::Cmp: {
        if (g->op == CmpOp::Eq) {
          // both directions by FME
          GoalOutcome a = fme_refute(hyps, CmpOp::Gt, g->lhs, g->rhs, cc, cfg);
          GoalOutcome b = fme_refute(hyps, CmpOp::Lt, g->lhs, g->rhs, cc, cfg);
          if (a.proved && b.proved) {
            r.status = ProveStatus::Proved;
            r.reason = "fme";
            return r;
          }
          r.reason = (a.nonlinear || b.nonlinear) ? "nonlinear"
                     : (a.blowup || b.blowup)     ? "blowup"
                                                  : "incomplete";
          return r;
        }
        if (g->op == CmpOp::Ne) {
          GoalOutcome a = fme_refute(hyps, CmpOp::Eq, g->lhs, g->rhs, cc, cfg);
          if (a.proved) {
            r.status = ProveStatus::Proved;
            r.reason = "fme";
            return r;
          }
          r.reason = a.nonlinear ? "nonlinear" : a.blowup ? "blowup" : "incomplete";
          return r;
        }
        GoalOutcome a = fme_refute(hyps, cmp_negate(g->op), g->lhs, g->rhs, cc, cfg);
        if (a.proved) {
          r.status = ProveStatus::Proved;
          r.reason = "fme";
          return r;
        }
        r.reason = a.nonlinear ? "nonlinear" : a.blowup ? "blowup" : "incomplete";
        return r;
      }
      case PureKind::And: {
        std::string route = "split:";
        for (const auto& s : g->sub) {
          ProveResult sub = prove_goal(s);
          if (!sub.proved()) return sub;
          route += sub.reason + ";";
        }
        r.status = ProveStatus::Proved;
        r.reason = route;
        return r;
      }
      case PureKind::Or: {
        for (const auto& s : g->sub) {
          ProveResult sub = prove_goal(s);
          if (sub.proved()) return sub;
        }
        r.reason = "disjunctive-goal";
        return r;
      }
      case PureKind::Not: {
        if (g->sub[0]->kind == PureKind::Cmp) return prove_goal(PureAtom::negate(g->sub[0]));
        r.reason = "incomplete";
        return r;
      }
      case PureKind::PredApp:
        r.reason = "incomplete";
        return r;
      case PureKind::BoolLit:
        r.reason = "incomplete";
        return r;
    }
    r.reason = "incomplete";
    return r;
  };

  return prove_goal(goal);
}

} // namespace sepveri
