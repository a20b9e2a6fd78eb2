#include "sepveri/strategy.hpp"

#include "sepveri/parser.hpp"
#include "sepveri/resolver.hpp"

#include <set>

namespace sepveri {

namespace {

void collect_pattern_vars_term(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == TermKind::LogicVar && !t->name.empty() && t->name[0] == '?')
    out.insert(t->name.substr(1));
  for (const auto& a : t->args) collect_pattern_vars_term(a, out);
}

void collect_pattern_vars_pure(const PurePtr& p, std::set<std::string>& out) {
  if (p->kind == PureKind::Cmp) {
    collect_pattern_vars_term(p->lhs, out);
    collect_pattern_vars_term(p->rhs, out);
  }
  for (const auto& s : p->sub) collect_pattern_vars_pure(s, out);
  for (const auto& t : p->args) collect_pattern_vars_term(t, out);
}

void collect_pattern_vars_spatial(const SpatialAtom& s, std::set<std::string>& out) {
  if (s.kind == SpatialKind::PointsTo) {
    collect_pattern_vars_term(s.loc, out);
    collect_pattern_vars_term(s.value, out);
  }
  for (const auto& t : s.args) collect_pattern_vars_term(t, out);
}

void collect_plain_vars_term(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == TermKind::LogicVar && (t->name.empty() || t->name[0] != '?'))
    out.insert(t->name);
  for (const auto& a : t->args) collect_plain_vars_term(a, out);
}

void collect_plain_vars_pure(const PurePtr& p, std::set<std::string>& out) {
  if (p->kind == PureKind::Cmp) {
    collect_plain_vars_term(p->lhs, out);
    collect_plain_vars_term(p->rhs, out);
  }
  for (const auto& s : p->sub) collect_plain_vars_pure(s, out);
  for (const auto& t : p->args) collect_plain_vars_term(t, out);
}

void collect_plain_vars_spatial(const SpatialAtom& s, std::set<std::string>& out) {
  if (s.kind == SpatialKind::PointsTo) {
    collect_plain_vars_term(s.loc, out);
    collect_plain_vars_term(s.value, out);
  }
  for (const auto& t : s.args) collect_plain_vars_term(t, out);
}

} // namespace

std::vector<Strategy> parse_strategy_file(const std::string& text, const std::string& filename,
                                          const LogicEnv& env) {
  Cursor cur(lex(text, filename, /*annotation_mode=*/true));
  std::vector<Strategy> out;

  while (!cur.at_eof()) {
    SourceLoc loc = cur.peek().loc;
    if (!cur.accept_ident("priority")) cur.fail("expected 'priority' to start a strategy");
    cur.expect(":");
    Strategy st;
    st.priority = static_cast<int>(cur.expect_int("priority"));
    st.file_order = static_cast<int>(out.size());
    st.origin = filename + ":" + std::to_string(loc.line);
    cur.expect(";");

    FormulaScope scope;
    scope.allow_patterns = true;
    bool saw_action = false;

    while (!cur.at_eof() && !cur.peek().is_ident("priority")) {
      SourceLoc cloc = cur.peek().loc;
      if (cur.peek().is_ident("left") || cur.peek().is_ident("right")) {
        bool right = cur.next().text == "right";
        cur.expect(":");
        StrategyPattern pat;
        pat.right = right;
        pat.loc = cloc;
        if (right && cur.accept_ident("exists")) {
          while (cur.peek().kind == Token::Kind::Ident)
            pat.exist_binders.push_back(cur.next().text);
          cur.expect(",");
          if (pat.exist_binders.empty()) cur.fail("expected binder names after 'exists'");
        }
        FormulaParser fp(cur, /*pattern_mode=*/true);
        auto f = fp.parse_single_formula();
        pat.spatial = f.spatial;
        if (f.spatial) {
          pat.atom = f.atom;
          if (pat.atom.kind == SpatialKind::PredApp) {
            const PredicateDef* def = env.find_pred(pat.atom.pred);
            if (!def)
              throw ParseError(DiagCode::UnknownPredicate, cloc,
                               "unknown predicate '" + pat.atom.pred + "'");
            if (def->params.size() != pat.atom.args.size())
              throw ParseError(DiagCode::ArityMismatch, cloc,
                               "predicate '" + pat.atom.pred + "' arity mismatch in pattern");
          }
          for (auto& a : pat.atom.args) a = resolve_term(a, env, scope, cloc);
          if (pat.atom.kind == SpatialKind::PointsTo) {
            pat.atom.loc = resolve_term(pat.atom.loc, env, scope, cloc);
            pat.atom.value = resolve_term(pat.atom.value, env, scope, cloc);
          }
        } else {
          pat.pure = resolve_pure(f.pure, env, scope, cloc);
        }
        if (!cur.accept_ident("at")) cur.fail("expected 'at <slot>' after pattern");
        pat.slot = static_cast<int>(cur.expect_int("slot number"));
        cur.expect(";");
        st.patterns.push_back(std::move(pat));
        continue;
      }
      if (cur.accept_ident("check")) {
        cur.expect(":");
        do {
          StrategyCheck ck;
          ck.loc = cur.peek().loc;
          if (cur.accept_ident("infer")) ck.kind = StrategyCheck::Kind::Infer;
          else if (cur.accept_ident("left_absent")) ck.kind = StrategyCheck::Kind::LeftAbsent;
          else if (cur.accept_ident("right_absent")) ck.kind = StrategyCheck::Kind::RightAbsent;
          else cur.fail("expected 'infer', 'left_absent' or 'right_absent'");
          cur.expect("(");
          FormulaParser fp(cur, true);
          ck.formula = resolve_pure(fp.parse_pure_formula(), env, scope, ck.loc);
          cur.expect(")");
          st.checks.push_back(std::move(ck));
        } while (cur.accept(","));
        cur.expect(";");
        continue;
      }
      if (cur.accept_ident("action")) {
        cur.expect(":");
        saw_action = true;
        do {
          StrategyOp op;
          op.loc = cur.peek().loc;
          if (cur.accept_ident("left_add") || cur.peek().is_ident("right_add")) {
            bool right = cur.accept_ident("right_add");
            op.kind = right ? StrategyOp::Kind::RightAdd : StrategyOp::Kind::LeftAdd;
            cur.expect("(");
            FormulaParser fp(cur, true);
            auto f = fp.parse_single_formula();
            op.spatial = f.spatial;
            if (f.spatial) {
              op.atom = f.atom;
              if (op.atom.kind == SpatialKind::PredApp) {
                const PredicateDef* def = env.find_pred(op.atom.pred);
                if (!def)
                  throw ParseError(DiagCode::UnknownPredicate, op.loc,
                                   "unknown predicate '" + op.atom.pred + "'");
              }
              for (auto& a : op.atom.args) a = resolve_term(a, env, scope, op.loc);
              if (op.atom.kind == SpatialKind::PointsTo) {
                op.atom.loc = resolve_term(op.atom.loc, env, scope, op.loc);
                op.atom.value = resolve_term(op.atom.value, env, scope, op.loc);
              }
            } else {
              op.pure = resolve_pure(f.pure, env, scope, op.loc);
            }
            cur.expect(")");
          } else if (cur.accept_ident("left_erase") || cur.peek().is_ident("right_erase")) {
            bool right = cur.accept_ident("right_erase");
            op.kind = right ? StrategyOp::Kind::RightErase : StrategyOp::Kind::LeftErase;
            cur.expect("(");
            op.slot = static_cast<int>(cur.expect_int("slot number"));
            cur.expect(")");
          } else if (cur.accept_ident("forall_add")) {
            op.kind = StrategyOp::Kind::ForallAdd;
            cur.expect("(");
            op.var = cur.expect_ident("variable name");
            cur.expect(")");
          } else if (cur.accept_ident("right_exist_add")) {
            op.kind = StrategyOp::Kind::RightExistAdd;
            cur.expect("(");
            op.var = cur.expect_ident("variable name");
            cur.expect(")");
          } else if (cur.accept_ident("instantiate")) {
            op.kind = StrategyOp::Kind::Instantiate;
            cur.expect("(");
            op.var = cur.expect_ident("existential pattern variable");
            cur.expect("->");
            FormulaParser fp(cur, true);
            op.term = resolve_term(fp.parse_term(), env, scope, op.loc);
            cur.expect(")");
          } else {
            cur.fail("expected a strategy operation");
          }
          st.ops.push_back(std::move(op));
        } while (cur.accept(","));
        cur.expect(";");
        continue;
      }
      cur.fail("expected 'left', 'right', 'check' or 'action' clause");
    }

    if (st.patterns.empty())
      throw ParseError(DiagCode::SyntaxError, loc, "strategy needs at least one pattern");
    if (!saw_action)
      throw ParseError(DiagCode::SyntaxError, loc, "strategy needs an action clause");

    // static validation: pattern variables introduced by patterns; actions and
    // checks may only use those; erase slots must exist; exist binders must
    // occur in a right pattern
    std::set<std::string> introduced;
    std::set<int> left_slots, right_slots;
    for (const auto& p : st.patterns) {
      if (p.spatial) collect_pattern_vars_spatial(p.atom, introduced);
      else collect_pattern_vars_pure(p.pure, introduced);
      auto& slots = p.right ? right_slots : left_slots;
      if (!slots.insert(p.slot).second)
        throw ParseError(DiagCode::SlotOutOfRange, p.loc,
                         "duplicate pattern slot " + std::to_string(p.slot));
    }
    for (const auto& p : st.patterns)
      for (const auto& b : p.exist_binders)
        if (!introduced.count(b))
          throw ParseError(DiagCode::UnboundPatternVariable, p.loc,
                           "exists binder '" + b + "' does not occur in the pattern");
    auto check_vars = [&](const std::set<std::string>& used, const SourceLoc& where) {
      for (const auto& v : used)
        if (!introduced.count(v))
          throw ParseError(DiagCode::UnboundPatternVariable, where,
                           "pattern variable '?" + v + "' is not introduced by any pattern");
    };
    for (const auto& ck : st.checks) {
      std::set<std::string> used;
      collect_pattern_vars_pure(ck.formula, used);
      check_vars(used, ck.loc);
    }
    std::set<std::string> action_vars;
    for (const auto& op : st.ops) {
      if (op.kind == StrategyOp::Kind::ForallAdd || op.kind == StrategyOp::Kind::RightExistAdd)
        action_vars.insert(op.var);
      std::set<std::string> plain;
      if (op.kind == StrategyOp::Kind::LeftAdd || op.kind == StrategyOp::Kind::RightAdd) {
        if (op.spatial) collect_plain_vars_spatial(op.atom, plain);
        else collect_plain_vars_pure(op.pure, plain);
      } else if (op.kind == StrategyOp::Kind::Instantiate) {
        collect_plain_vars_term(op.term, plain);
      }
      for (const auto& v : plain)
        if (!action_vars.count(v))
          throw ParseError(DiagCode::UnboundPatternVariable, op.loc,
                           "variable '" + v +
                               "' in an action is neither a pattern variable nor introduced "
                               "by forall_add/right_exist_add");
      std::set<std::string> used;
      if (op.kind == StrategyOp::Kind::LeftAdd || op.kind == StrategyOp::Kind::RightAdd) {
        if (op.spatial) collect_pattern_vars_spatial(op.atom, used);
        else collect_pattern_vars_pure(op.pure, used);
      } else if (op.kind == StrategyOp::Kind::Instantiate) {
        collect_pattern_vars_term(op.term, used);
        if (!introduced.count(op.var))
          throw ParseError(DiagCode::UnboundPatternVariable, op.loc,
                           "instantiate target '?" + op.var + "' is not a pattern variable");
      } else if (op.kind == StrategyOp::Kind::LeftErase) {
        if (!left_slots.count(op.slot))
          throw ParseError(DiagCode::SlotOutOfRange, op.loc,
                           "left_erase slot " + std::to_string(op.slot) + " has no pattern");
      } else if (op.kind == StrategyOp::Kind::RightErase) {
        if (!right_slots.count(op.slot))
          throw ParseError(DiagCode::SlotOutOfRange, op.loc,
                           "right_erase slot " + std::to_string(op.slot) + " has no pattern");
      }
      check_vars(used, op.loc);
    }

    out.push_back(std::move(st));
  }
  return out;
}

} // namespace sepveri
