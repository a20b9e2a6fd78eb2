#include "sepveri/logic_parser.hpp"

#include "sepveri/parser.hpp"
#include "sepveri/resolver.hpp"

namespace sepveri {

namespace {

Sort parse_sort_name(Cursor& cur, const LogicEnv& env, bool check) {
  SourceLoc loc = cur.peek().loc;
  std::string name = cur.expect_ident("sort name");
  if (name == "Z" || name == "addr") return Sort{name};
  if (check && !env.sorts.count(name))
    throw ParseError(DiagCode::UnknownSort, loc, "unknown sort '" + name + "'");
  return Sort{name};
}

struct RawPredicate {
  std::string name;
  std::vector<PredParam> params;
  Assertion body;
  SourceLoc loc;
};

struct RawEquation {
  TermPtr lhs;
  TermPtr rhs;
  SourceLoc loc;
};

} // namespace

LogicEnv parse_logic(const std::string& text, const std::string& filename) {
  Cursor cur(lex(text, filename, /*annotation_mode=*/true));
  LogicEnv env;
  std::vector<RawPredicate> raw_preds;
  std::map<std::string, std::vector<RawEquation>> raw_equations;

  // pass 1: declarations with unresolved bodies
  while (!cur.at_eof()) {
    SourceLoc loc = cur.peek().loc;
    if (cur.accept_ident("sort")) {
      SortDef sd;
      sd.name = cur.expect_ident("sort name");
      if (env.sorts.count(sd.name))
        throw ParseError(DiagCode::DuplicateDefinition, loc,
                         "sort '" + sd.name + "' already declared");
      if (cur.accept("=")) {
        do {
          CtorDef c;
          c.name = cur.expect_ident("constructor name");
          if (cur.accept("(")) {
            do {
              c.arg_sorts.push_back(parse_sort_name(cur, env, /*check=*/false));
            } while (cur.accept(","));
            cur.expect(")");
          }
          sd.ctors.push_back(std::move(c));
        } while (cur.accept("|"));
      }
      cur.expect(";");
      // constructor names must be project-unique so applications resolve
      for (const auto& c : sd.ctors) {
        const CtorDef* dup = nullptr;
        if (env.sort_of_ctor(c.name, &dup))
          throw ParseError(DiagCode::DuplicateDefinition, loc,
                           "constructor '" + c.name + "' already declared");
      }
      env.sorts[sd.name] = std::move(sd);
      continue;
    }
    if (cur.accept_ident("func")) {
      PureFunDef fd;
      fd.name = cur.expect_ident("function name");
      if (env.funs.count(fd.name))
        throw ParseError(DiagCode::DuplicateDefinition, loc,
                         "function '" + fd.name + "' already declared");
      cur.expect("(");
      if (!cur.peek().is(")")) {
        do {
          fd.arg_sorts.push_back(parse_sort_name(cur, env, false));
        } while (cur.accept(","));
      }
      cur.expect(")");
      cur.expect(":");
      fd.result = parse_sort_name(cur, env, false);
      if (cur.accept("{")) {
        FormulaParser fp(cur);
        while (!cur.accept("}")) {
          RawEquation eq;
          eq.loc = cur.peek().loc;
          eq.lhs = fp.parse_term();
          cur.expect("=>");
          eq.rhs = fp.parse_term();
          cur.expect(";");
          raw_equations[fd.name].push_back(std::move(eq));
        }
      }
      cur.accept(";");
      env.funs[fd.name] = std::move(fd);
      continue;
    }
    if (cur.accept_ident("predicate")) {
      RawPredicate rp;
      rp.loc = loc;
      rp.name = cur.expect_ident("predicate name");
      cur.expect("(");
      do {
        PredParam p;
        p.name = cur.expect_ident("parameter name");
        cur.expect(":");
        p.sort = parse_sort_name(cur, env, true);
        rp.params.push_back(std::move(p));
      } while (cur.accept(","));
      cur.expect(")");
      if (!cur.accept(":=") && !cur.accept("="))
        cur.fail("expected ':=' in predicate definition");
      FormulaParser fp(cur);
      rp.body = fp.parse_assertion();
      cur.expect(";");
      if (env.preds.count(rp.name))
        throw ParseError(DiagCode::DuplicateDefinition, loc,
                         "predicate '" + rp.name + "' already defined");
      // register the header now so bodies may be mutually recursive
      PredicateDef header;
      header.name = rp.name;
      header.params = rp.params;
      env.preds[rp.name] = header;
      raw_preds.push_back(std::move(rp));
      continue;
    }
    cur.fail("expected 'sort', 'func' or 'predicate'");
  }

  // validate sort references now that all sorts are known
  auto check_sort = [&](const Sort& s, const SourceLoc& loc) {
    if (s.name != "Z" && s.name != "addr" && !env.sorts.count(s.name))
      throw ParseError(DiagCode::UnknownSort, loc, "unknown sort '" + s.name + "'");
  };
  for (const auto& [_, sd] : env.sorts)
    for (const auto& c : sd.ctors)
      for (const auto& s : c.arg_sorts) check_sort(s, SourceLoc{filename, 1, 1});
  for (const auto& [_, fd] : env.funs) {
    for (const auto& s : fd.arg_sorts) check_sort(s, SourceLoc{filename, 1, 1});
    check_sort(fd.result, SourceLoc{filename, 1, 1});
  }

  // pass 2: resolve equations
  for (auto& [fname, eqs] : raw_equations) {
    PureFunDef& fd = env.funs[fname];
    for (const auto& raw : eqs) {
      FormulaScope scope;
      TermPtr lhs = resolve_term(raw.lhs, env, scope, raw.loc);
      if (lhs->kind != TermKind::App || lhs->name != fname)
        throw ParseError(DiagCode::SyntaxError, raw.loc,
                         "equation must define '" + fname + "'");
      if (lhs->args.size() != fd.arg_sorts.size())
        throw ParseError(DiagCode::ArityMismatch, raw.loc, "equation arity mismatch");
      // patterns: variables or constructor shapes over variables
      std::function<void(const TermPtr&)> check_pattern = [&](const TermPtr& t) {
        if (t->kind == TermKind::LogicVar || t->kind == TermKind::IntLit) return;
        if (t->kind == TermKind::App && t->app_kind == AppKind::Ctor) {
          for (const auto& a : t->args) check_pattern(a);
          return;
        }
        throw ParseError(DiagCode::SyntaxError, raw.loc,
                         "equation patterns must be variables or constructor shapes");
      };
      for (const auto& a : lhs->args) check_pattern(a);
      FunEquation eq;
      eq.patterns = lhs->args;
      eq.rhs = resolve_term(raw.rhs, env, scope, raw.loc);
      // non-overlap: compare top-level constructor shapes with earlier rules
      for (const auto& prev : fd.equations) {
        bool overlap = true;
        for (std::size_t i = 0; i < eq.patterns.size() && overlap; ++i) {
          const TermPtr& a = prev.patterns[i];
          const TermPtr& b = eq.patterns[i];
          bool a_ctor = a->kind == TermKind::App;
          bool b_ctor = b->kind == TermKind::App;
          if (a_ctor && b_ctor && a->name != b->name) overlap = false;
        }
        if (overlap)
          throw ParseError(DiagCode::DuplicateDefinition, raw.loc,
                           "overlapping equations for '" + fname + "'");
      }
      fd.equations.push_back(std::move(eq));
    }
  }

  // pass 3: resolve predicate bodies
  for (auto& rp : raw_preds) {
    PredicateDef def;
    def.name = rp.name;
    def.params = rp.params;
    def.body = rp.body;
    FormulaScope scope;
    for (const auto& p : def.params) scope.var_sorts[p.name] = p.sort;
    resolve_assertion(def.body, env, scope, rp.loc);
    env.preds[def.name] = std::move(def);
  }

  return env;
}

} // namespace sepveri
