#include "sepveri/parser.hpp"

#include "sepveri/printer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sepveri {

void Cursor::expect(const char* punct) {
  if (!accept(punct)) fail(std::string("expected '") + punct + "'");
}

std::string Cursor::expect_ident(const char* what) {
  if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what);
  return next().text;
}

std::int64_t Cursor::expect_int(const char* what) {
  bool neg = accept("-");
  if (peek().kind != Token::Kind::Int) fail(std::string("expected ") + what);
  std::int64_t v = next().int_val;
  return neg ? -v : v;
}

void Cursor::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string got = t.kind == Token::Kind::Eof ? "end of input" : "'" + t.text + "'";
  throw ParseError(DiagCode::SyntaxError, t.loc, msg + ", got " + got);
}

// ---------------------------------------------------------------------------
// Formula grammar

namespace {

bool is_relop(const Token& t, CmpOp* op) {
  if (t.kind != Token::Kind::Punct) return false;
  if (t.text == "==") { *op = CmpOp::Eq; return true; }
  if (t.text == "!=") { *op = CmpOp::Ne; return true; }
  if (t.text == "<") { *op = CmpOp::Lt; return true; }
  if (t.text == "<=") { *op = CmpOp::Le; return true; }
  if (t.text == ">") { *op = CmpOp::Gt; return true; }
  if (t.text == ">=") { *op = CmpOp::Ge; return true; }
  return false;
}

bool is_formula_keyword(const std::string& s) {
  return s == "exists" || s == "emp" || s == "which" || s == "implies" || s == "at" ||
         s == "with" || s == "Require" || s == "Ensure" || s == "With" || s == "Assert" ||
         s == "Inv" || s == "Branch" || s == "Destruct" || s == "where";
}

} // namespace

bool FormulaParser::is_deref_form(const TermPtr& t) const {
  if (t->kind == TermKind::FieldAddr || t->kind == TermKind::Index) return true;
  return t->kind == TermKind::App && t->name == "*" && t->args.size() == 1;
}

TermPtr FormulaParser::parse_primary() {
  const Token& t = cur_.peek();
  if (t.kind == Token::Kind::Int) {
    cur_.next();
    return Term::int_lit(t.int_val);
  }
  if (t.is("?")) {
    if (!pattern_mode_) cur_.fail("pattern variables are only allowed in strategy files");
    cur_.next();
    std::string name = cur_.expect_ident("pattern variable name");
    return Term::logic_var("?" + name);
  }
  if (t.is("(")) {
    cur_.next();
    TermPtr inner = parse_add(false, false);
    cur_.expect(")");
    return inner;
  }
  if (t.kind == Token::Kind::Ident) {
    std::string name = cur_.next().text;
    if (name == "NULL") return Term::null();
    if (name == "INT_MIN") return Term::int_lit(kIntMin);
    if (name == "INT_MAX") return Term::int_lit(kIntMax);
    if (name == "__undef") return Term::undef();
    if (cur_.accept("(")) {
      std::vector<TermPtr> args;
      if (!cur_.peek().is(")")) {
        do {
          args.push_back(parse_add(false, false));
        } while (cur_.accept(","));
      }
      cur_.expect(")");
      return Term::app(name, std::move(args), AppKind::Unresolved);
    }
    if (cur_.peek().is("@")) {
      cur_.next();
      std::string pre = cur_.expect_ident("'pre'");
      if (pre != "pre") cur_.fail("expected '@pre'");
      return Term::prog_var(name, true);
    }
    return Term::logic_var(name); // variables are classified by the resolver
  }
  cur_.fail("expected term");
}

TermPtr FormulaParser::parse_unary() {
  if (cur_.accept("-")) {
    TermPtr t = parse_unary();
    if (t->kind == TermKind::IntLit) return Term::int_lit(-t->int_val);
    return Term::app("neg", {t}, AppKind::Builtin, sort_int());
  }
  if (cur_.accept("*")) {
    TermPtr t = parse_unary();
    return Term::app("*", {t}, AppKind::Unresolved);
  }
  if (cur_.accept("&")) {
    TermPtr t = parse_unary();
    if (t->kind == TermKind::FieldAddr || t->kind == TermKind::Index)
      return Term::app("&", {t}, AppKind::Unresolved);
    return Term::app("&", {t}, AppKind::Unresolved);
  }
  // postfix chain
  TermPtr t = parse_primary();
  for (;;) {
    if (cur_.accept("->")) {
      std::string f = cur_.expect_ident("field name");
      t = Term::field_addr(t, f);
      continue;
    }
    if (cur_.peek().is(".") ) {
      cur_.next();
      std::string f = cur_.expect_ident("field name");
      t = Term::field_addr(t, f);
      continue;
    }
    if (cur_.accept("[")) {
      TermPtr idx = parse_add(false, false);
      cur_.expect("]");
      t = Term::index_addr(t, idx);
      continue;
    }
    return t;
  }
}

namespace {

bool stops_spatial_star(const TermPtr& t) {
  // a complete application / cell form ends the atom at a top-level '*'
  if (t->kind == TermKind::FieldAddr || t->kind == TermKind::Index) return true;
  if (t->kind == TermKind::App) {
    if (t->app_kind == AppKind::Builtin) return false;
    return true; // named application, deref or addr-of
  }
  return false;
}

} // namespace

TermPtr FormulaParser::parse_mul(bool top_level, bool after_relop) {
  TermPtr t = parse_unary();
  for (;;) {
    const Token& tok = cur_.peek();
    if (tok.is("/") || tok.is("%")) {
      std::string op = cur_.next().text;
      TermPtr r = parse_unary();
      t = Term::app(op, {t, r}, AppKind::Builtin, sort_int());
      continue;
    }
    if (tok.is("*")) {
      if (top_level && (after_relop || stops_spatial_star(t))) return t; // separating conjunction
      cur_.next();
      TermPtr r = parse_unary();
      t = Term::app("*", {t, r}, AppKind::Builtin, sort_int());
      continue;
    }
    return t;
  }
}

TermPtr FormulaParser::parse_add(bool top_level, bool after_relop) {
  TermPtr t = parse_mul(top_level, after_relop);
  for (;;) {
    const Token& tok = cur_.peek();
    if (tok.is("+") || tok.is("-")) {
      std::string op = cur_.next().text;
      TermPtr r = parse_mul(top_level, after_relop);
      t = Term::app(op, {t, r}, AppKind::Builtin, sort_int());
      continue;
    }
    return t;
  }
}

TermPtr FormulaParser::parse_term() { return parse_add(false, false); }

FormulaParser::ParsedAtom FormulaParser::parse_atom() {
  ParsedAtom out;
  const Token& t = cur_.peek();

  if (t.is_ident("emp")) {
    cur_.next();
    out.kind = ParsedAtom::Kind::Spatial;
    out.spatial = SpatialAtom::emp();
    return out;
  }
  if (t.is_ident("true") || t.is_ident("false")) {
    bool v = t.text == "true";
    cur_.next();
    out.kind = ParsedAtom::Kind::Pure;
    out.pure = PureAtom::bool_lit(v);
    return out;
  }
  if (t.is_ident("has_permission")) {
    cur_.next();
    cur_.expect("(");
    TermPtr loc = parse_term();
    cur_.expect(")");
    if (loc->kind == TermKind::App && loc->name == "&" && loc->args.size() == 1)
      loc = loc->args[0];
    out.kind = ParsedAtom::Kind::Spatial;
    out.spatial = SpatialAtom::has_permission(loc);
    return out;
  }
  if (t.is("!")) {
    cur_.next();
    ParsedAtom sub = parse_atom();
    out.kind = ParsedAtom::Kind::Pure;
    out.pure = PureAtom::negate(atom_to_pure(sub));
    return out;
  }
  if (t.is("(")) {
    // parenthesized pure formula, else a parenthesized term
    std::size_t m = cur_.mark();
    try {
      cur_.next();
      PurePtr p = parse_pure_formula();
      cur_.expect(")");
      out.kind = ParsedAtom::Kind::Pure;
      out.pure = p;
      return out;
    } catch (const ParseError&) {
      cur_.rewind(m);
    }
  }

  TermPtr lhs = parse_add(true, false);
  CmpOp op;
  if (is_relop(cur_.peek(), &op)) {
    cur_.next();
    TermPtr rhs = parse_add(true, true);
    if (op == CmpOp::Eq && is_deref_form(lhs)) {
      TermPtr loc = lhs->kind == TermKind::App ? lhs->args[0] : lhs;
      out.kind = ParsedAtom::Kind::Spatial;
      out.spatial = SpatialAtom::points_to(loc, rhs);
      return out;
    }
    if (op == CmpOp::Eq && is_deref_form(rhs)) {
      TermPtr loc = rhs->kind == TermKind::App ? rhs->args[0] : rhs;
      out.kind = ParsedAtom::Kind::Spatial;
      out.spatial = SpatialAtom::points_to(loc, lhs);
      return out;
    }
    out.kind = ParsedAtom::Kind::Pure;
    out.pure = PureAtom::cmp(op, lhs, rhs);
    return out;
  }
  out.kind = ParsedAtom::Kind::BareTerm;
  out.term = lhs;
  return out;
}

PurePtr FormulaParser::atom_to_pure(const ParsedAtom& a) {
  if (a.kind == ParsedAtom::Kind::Pure) return a.pure;
  if (a.kind == ParsedAtom::Kind::BareTerm && a.term->kind == TermKind::App &&
      a.term->app_kind == AppKind::Unresolved && a.term->name != "*" && a.term->name != "&")
    return PureAtom::pred_app(a.term->name, a.term->args);
  throw ParseError(DiagCode::SyntaxError, cur_.peek().loc, "expected a pure formula");
}

PurePtr FormulaParser::parse_pure_formula() {
  // or-level
  std::vector<PurePtr> disjuncts;
  for (;;) {
    // and-level
    std::vector<PurePtr> conjuncts;
    for (;;) {
      ParsedAtom a = parse_atom();
      if (a.kind == ParsedAtom::Kind::Spatial)
        throw ParseError(DiagCode::SyntaxError, cur_.peek().loc,
                         "spatial atom in pure position");
      conjuncts.push_back(atom_to_pure(a));
      if (!cur_.accept("&&")) break;
    }
    disjuncts.push_back(PureAtom::conj(std::move(conjuncts)));
    if (!cur_.accept("||")) break;
  }
  return PureAtom::disj(std::move(disjuncts));
}

SymbolicHeap FormulaParser::parse_heap() {
  SymbolicHeap h;
  if (cur_.peek().is_ident("exists")) {
    cur_.next();
    while (cur_.peek().kind == Token::Kind::Ident && !cur_.peek().is_ident("emp"))
      h.exists.push_back(BoundVar{cur_.next().text, sort_unknown()});
    cur_.expect(",");
    if (h.exists.empty()) cur_.fail("expected bound variables after 'exists'");
  }
  for (;;) {
    ParsedAtom a = parse_atom();
    switch (a.kind) {
      case ParsedAtom::Kind::Pure:
        h.pure.push_back(a.pure);
        break;
      case ParsedAtom::Kind::Spatial:
        h.spatial.push_back(a.spatial);
        break;
      case ParsedAtom::Kind::BareTerm:
        if (a.term->kind == TermKind::App && a.term->app_kind == AppKind::Unresolved &&
            a.term->name != "*" && a.term->name != "&") {
          // predicate-style application; the resolver may reroute it to the
          // pure part when the name is a pure predicate
          h.spatial.push_back(SpatialAtom::pred_app(a.term->name, a.term->args));
        } else {
          throw ParseError(DiagCode::SyntaxError, cur_.peek().loc,
                           "expected a formula, found a bare term");
        }
        break;
    }
    if (cur_.accept("&&") || cur_.accept("*")) continue;
    return h;
  }
}

Assertion FormulaParser::parse_assertion() {
  Assertion a;
  for (;;) {
    std::optional<std::string> name;
    if (cur_.peek().kind == Token::Kind::Ident && cur_.peek(1).is(":") &&
        !is_formula_keyword(cur_.peek().text)) {
      name = cur_.next().text;
      cur_.next(); // ':'
    }
    SymbolicHeap h = parse_heap();
    a.branches.push_back(Branch{std::move(name), std::move(h)});
    if (!cur_.accept("||")) break;
  }
  return a;
}

FormulaParser::SingleFormula FormulaParser::parse_single_formula() {
  SingleFormula out;
  ParsedAtom a = parse_atom();
  switch (a.kind) {
    case ParsedAtom::Kind::Pure:
      out.spatial = false;
      out.pure = a.pure;
      return out;
    case ParsedAtom::Kind::Spatial:
      out.spatial = true;
      out.atom = a.spatial;
      return out;
    default:
      if (a.term->kind == TermKind::App && a.term->app_kind == AppKind::Unresolved &&
          a.term->name != "*" && a.term->name != "&") {
        out.spatial = true;
        out.atom = SpatialAtom::pred_app(a.term->name, a.term->args);
        return out;
      }
      throw ParseError(DiagCode::SyntaxError, cur_.peek().loc, "expected a pattern formula");
  }
}

// ---------------------------------------------------------------------------
// Annotation commands

namespace {

std::vector<std::string> parse_branch_filter(Cursor& cur) {
  std::vector<std::string> names;
  if (cur.accept("$")) {
    do {
      names.push_back(cur.expect_ident("branch name"));
    } while (cur.accept(","));
  }
  return names;
}

void expect_annot_end(Cursor& cur) {
  if (cur.peek().kind != Token::Kind::AnnotEnd)
    cur.fail("unexpected content at end of annotation");
  cur.next();
}

std::vector<InvEntryMap> parse_entry_map(Cursor& cur) {
  std::vector<InvEntryMap> out;
  do {
    InvEntryMap m;
    if (cur.accept("*")) m.from = "*";
    else m.from = cur.expect_ident("incoming branch name");
    cur.expect("->");
    m.to = cur.expect_ident("invariant branch name");
    out.push_back(std::move(m));
  } while (cur.accept(","));
  return out;
}

// Parses the body of a `/*@ ... */` annotation at statement position.
Annot parse_annotation_command(Cursor& cur, SourceLoc loc) {
  Annot a;
  a.loc = loc;
  FormulaParser fp(cur);

  if (cur.accept_ident("Assert")) {
    a.kind = Annot::Kind::AssertFull;
    a.full = true;
    a.assertion = fp.parse_assertion();
    a.filter = parse_branch_filter(cur);
    expect_annot_end(cur);
    return a;
  }
  if (cur.accept_ident("Inv")) {
    a.kind = Annot::Kind::Inv;
    a.full = cur.accept_ident("Assert");
    a.assertion = fp.parse_assertion();
    if (cur.accept_ident("with")) a.entry_map = parse_entry_map(cur);
    expect_annot_end(cur);
    return a;
  }
  if (cur.accept_ident("Branch")) {
    if (cur.accept_ident("name")) {
      a.kind = Annot::Kind::BranchName;
      for (;;) {
        std::string name = cur.expect_ident("branch name");
        if (cur.accept(":")) {
          PurePtr cond = fp.parse_pure_formula();
          a.name_cases.emplace_back(name, cond);
          if (cur.accept(";")) continue;
          break;
        }
        a.rest_name = name;
        break;
      }
      expect_annot_end(cur);
      return a;
    }
    if (cur.accept_ident("join")) {
      a.kind = Annot::Kind::BranchJoin;
      do {
        a.join_sources.push_back(cur.expect_ident("branch name"));
      } while (cur.accept(","));
      cur.expect("->");
      a.target = cur.expect_ident("joined branch name");
      expect_annot_end(cur);
      return a;
    }
    if (cur.accept_ident("clear")) {
      a.kind = Annot::Kind::BranchClear;
      a.var = cur.expect_ident("branch name");
      expect_annot_end(cur);
      return a;
    }
    if (cur.accept_ident("transition")) {
      a.kind = Annot::Kind::BranchTransition;
      a.source = cur.expect_ident("invariant branch name");
      cur.expect("->");
      a.target = cur.expect_ident("invariant branch name");
      expect_annot_end(cur);
      return a;
    }
    cur.fail("expected 'name', 'join', 'clear' or 'transition' after 'Branch'");
  }
  if (cur.accept_ident("Destruct")) {
    a.kind = Annot::Kind::Destruct;
    a.var = cur.expect_ident("logical variable");
    expect_annot_end(cur);
    return a;
  }

  // bare assertion: partial assert, possibly a which-implies
  a.assertion = fp.parse_assertion();
  if (cur.accept_ident("which")) {
    if (!cur.accept_ident("implies")) cur.fail("expected 'implies' after 'which'");
    a.kind = Annot::Kind::WhichImplies;
    a.post = fp.parse_assertion();
  } else {
    a.kind = Annot::Kind::AssertPartial;
  }
  a.filter = parse_branch_filter(cur);
  expect_annot_end(cur);
  return a;
}

WhereClause parse_where_clause(Cursor& cur, SourceLoc loc) {
  WhereClause w;
  w.loc = loc;
  // where (spec) [$ branch] (spec) [$ branch] ...
  while (cur.accept("(")) {
    std::string spec = cur.expect_ident("specification name");
    cur.expect(")");
    std::optional<std::string> branch;
    if (cur.accept("$")) branch = cur.expect_ident("branch name");
    w.entries.emplace_back(spec, branch);
  }
  if (w.entries.empty()) cur.fail("expected '(spec_name)' after 'where'");
  expect_annot_end(cur);
  return w;
}

FuncSpecSyntax parse_spec_annotation(Cursor& cur, SourceLoc loc) {
  FuncSpecSyntax s;
  s.loc = loc;
  if (cur.peek().kind == Token::Kind::Ident && !cur.peek().is_ident("With") &&
      !cur.peek().is_ident("Require")) {
    s.name = cur.next().text;
    if (cur.accept("<=")) s.base = cur.expect_ident("base specification name");
  }
  if (cur.accept_ident("With")) {
    while (cur.peek().kind == Token::Kind::Ident && !cur.peek().is_ident("Require"))
      s.with_vars.push_back(cur.next().text);
    if (s.with_vars.empty()) cur.fail("expected variables after 'With'");
  }
  FormulaParser fp(cur);
  if (!cur.accept_ident("Require")) cur.fail("expected 'Require' in specification");
  s.require = fp.parse_assertion();
  if (!cur.accept_ident("Ensure")) cur.fail("expected 'Ensure' in specification");
  s.ensure = fp.parse_assertion();
  expect_annot_end(cur);
  return s;
}

} // namespace

// ---------------------------------------------------------------------------
// C types

CTypePtr CType::void_type() {
  auto t = std::make_shared<CType>();
  t->kind = Kind::Void;
  return t;
}
CTypePtr CType::int_type() {
  auto t = std::make_shared<CType>();
  t->kind = Kind::Int;
  return t;
}
CTypePtr CType::ptr(CTypePtr to) {
  auto t = std::make_shared<CType>();
  t->kind = Kind::Ptr;
  t->pointee = std::move(to);
  return t;
}
CTypePtr CType::struct_type(std::string tag) {
  auto t = std::make_shared<CType>();
  t->kind = Kind::Struct;
  t->name = std::move(tag);
  return t;
}
CTypePtr CType::enum_type(std::string tag) {
  auto t = std::make_shared<CType>();
  t->kind = Kind::Enum;
  t->name = std::move(tag);
  return t;
}
CTypePtr CType::named(std::string alias) {
  auto t = std::make_shared<CType>();
  t->kind = Kind::Named;
  t->name = std::move(alias);
  return t;
}

std::string ctype_str(const CTypePtr& t) {
  if (!t) return "?";
  switch (t->kind) {
    case CType::Kind::Void: return "void";
    case CType::Kind::Int: return "int";
    case CType::Kind::Ptr: return ctype_str(t->pointee) + " *";
    case CType::Kind::Struct: return "struct " + t->name;
    case CType::Kind::Enum: return "enum " + t->name;
    case CType::Kind::Named: return t->name;
  }
  return "?";
}

CExprPtr CExpr::make(Kind k, SourceLoc loc) {
  auto e = std::make_shared<CExpr>();
  e->kind = k;
  e->loc = std::move(loc);
  return e;
}

// ---------------------------------------------------------------------------
// C parser

namespace {

class CParser {
public:
  CParser(AnnotatedProgram& prog, const IncludeLoader& loader) : prog_(prog), loader_(loader) {}

  void parse_file(const std::string& text, const std::string& filename) {
    if (!included_.insert(filename).second) return;
    Cursor cur(lex(text, filename));
    parse_decls(cur, filename);
  }

private:
  void parse_decls(Cursor& cur, const std::string& filename) {
    while (!cur.at_eof()) {
      if (cur.peek().kind == Token::Kind::Include) {
        std::string path = cur.next().text;
        if (!loader_)
          throw ParseError(DiagCode::IOError, cur.peek().loc,
                           "#include is not available in this context");
        auto content = loader_(path, filename);
        if (!content)
          throw ParseError(DiagCode::IOError, cur.peek().loc, "cannot open include " + path);
        parse_file(*content, path);
        continue;
      }
      parse_top_decl(cur);
    }
  }

  [[noreturn]] void unsupported(DiagCode code, SourceLoc loc, const std::string& what) {
    throw ParseError(code, loc, what + " is not supported");
  }

  bool is_type_start(Cursor& cur) {
    const Token& t = cur.peek();
    if (t.kind != Token::Kind::Ident) return false;
    const std::string& s = t.text;
    return s == "void" || s == "int" || s == "char" || s == "short" || s == "long" ||
           s == "unsigned" || s == "signed" || s == "struct" || s == "enum" || s == "const" ||
           s == "union" || s == "float" || s == "double" || typedefs_.count(s) > 0;
  }

  CTypePtr parse_type_specifier(Cursor& cur) {
    SourceLoc loc = cur.peek().loc;
    while (cur.accept_ident("const")) {
    }
    if (cur.peek().is_ident("float") || cur.peek().is_ident("double"))
      unsupported(DiagCode::UnsupportedFloat, loc, "floating-point type");
    if (cur.peek().is_ident("union"))
      unsupported(DiagCode::UnsupportedFeature, loc, "union type");
    if (cur.accept_ident("void")) return CType::void_type();
    if (cur.peek().is_ident("struct")) {
      cur.next();
      std::string tag =
          cur.peek().kind == Token::Kind::Ident ? cur.next().text : fresh_anon("struct");
      if (cur.peek().is("{")) parse_struct_body(cur, tag, loc);
      return CType::struct_type(tag);
    }
    if (cur.peek().is_ident("enum")) {
      cur.next();
      std::string tag =
          cur.peek().kind == Token::Kind::Ident ? cur.next().text : fresh_anon("enum");
      if (cur.peek().is("{")) parse_enum_body(cur, tag, loc);
      return CType::enum_type(tag);
    }
    // integer type keyword soup folds to int
    bool any = false;
    while (cur.peek().kind == Token::Kind::Ident &&
           (cur.peek().text == "int" || cur.peek().text == "char" || cur.peek().text == "short" ||
            cur.peek().text == "long" || cur.peek().text == "unsigned" ||
            cur.peek().text == "signed")) {
      cur.next();
      any = true;
    }
    if (any) return CType::int_type();
    if (cur.peek().kind == Token::Kind::Ident && typedefs_.count(cur.peek().text))
      return typedefs_.at(cur.next().text);
    cur.fail("expected type specifier");
  }

  CTypePtr parse_pointers(Cursor& cur, CTypePtr base) {
    while (cur.accept("*")) {
      base = CType::ptr(base);
      while (cur.accept_ident("const")) {
      }
    }
    return base;
  }

  void parse_struct_body(Cursor& cur, const std::string& tag, SourceLoc loc) {
    cur.expect("{");
    StructDef def;
    def.tag = tag;
    def.loc = loc;
    while (!cur.accept("}")) {
      CTypePtr base = parse_type_specifier(cur);
      do {
        CTypePtr ft = parse_pointers(cur, base);
        SourceLoc floc = cur.peek().loc;
        if (cur.peek().is("(")) unsupported(DiagCode::UnsupportedFunctionPointer, floc,
                                            "function pointer member");
        std::string fname = cur.expect_ident("field name");
        if (cur.peek().is(":"))
          unsupported(DiagCode::UnsupportedBitField, floc, "bit-field member");
        if (cur.peek().is("["))
          unsupported(DiagCode::UnsupportedFeature, floc, "array member");
        def.fields.push_back(StructField{fname, ft, floc});
      } while (cur.accept(","));
      cur.expect(";");
    }
    prog_.structs.push_back(std::move(def));
  }

  void parse_enum_body(Cursor& cur, const std::string& tag, SourceLoc loc) {
    cur.expect("{");
    EnumDef def;
    def.tag = tag;
    def.loc = loc;
    std::int64_t next_val = 0;
    while (!cur.accept("}")) {
      std::string name = cur.expect_ident("enumerator name");
      if (cur.accept("=")) next_val = cur.expect_int("enumerator value");
      def.items.emplace_back(name, next_val);
      enum_constants_[name] = next_val;
      next_val++;
      if (!cur.accept(",")) {
        cur.expect("}");
        break;
      }
    }
    prog_.enums.push_back(std::move(def));
  }

  std::string fresh_anon(const std::string& kind) {
    return "__anon_" + kind + std::to_string(anon_counter_++);
  }

  void parse_top_decl(Cursor& cur) {
    SourceLoc loc = cur.peek().loc;
    if (cur.accept_ident("typedef")) {
      CTypePtr base = parse_type_specifier(cur);
      CTypePtr t = parse_pointers(cur, base);
      std::string alias = cur.expect_ident("typedef name");
      cur.expect(";");
      typedefs_[alias] = t;
      prog_.typedefs[alias] = t;
      return;
    }
    while (cur.accept_ident("static") || cur.accept_ident("extern") || cur.accept_ident("inline")) {
    }
    if (cur.peek().is_ident("goto"))
      unsupported(DiagCode::UnsupportedGoto, loc, "goto");
    CTypePtr base = parse_type_specifier(cur);
    if (cur.accept(";")) return; // bare struct/enum definition
    CTypePtr t = parse_pointers(cur, base);
    if (cur.peek().is("("))
      unsupported(DiagCode::UnsupportedFunctionPointer, cur.peek().loc, "function pointer");
    std::string name = cur.expect_ident("declarator name");
    if (cur.peek().is("(")) {
      parse_function(cur, t, name, loc);
      return;
    }
    unsupported(DiagCode::UnsupportedFeature, loc, "global variable");
  }

  void parse_function(Cursor& cur, CTypePtr ret, const std::string& name, SourceLoc loc) {
    cur.expect("(");
    std::vector<CParam> params;
    if (!cur.peek().is(")")) {
      if (cur.peek().is_ident("void") && cur.peek(1).is(")")) {
        cur.next();
      } else {
        do {
          SourceLoc ploc = cur.peek().loc;
          CTypePtr base = parse_type_specifier(cur);
          CTypePtr pt = parse_pointers(cur, base);
          if (cur.peek().is("("))
            unsupported(DiagCode::UnsupportedFunctionPointer, ploc, "function pointer parameter");
          std::string pname = cur.expect_ident("parameter name");
          params.push_back(CParam{pt, pname, ploc});
        } while (cur.accept(","));
      }
    }
    cur.expect(")");

    std::vector<FuncSpecSyntax> specs;
    while (cur.peek().kind == Token::Kind::AnnotStart) {
      SourceLoc aloc = cur.next().loc;
      specs.push_back(parse_spec_annotation(cur, aloc));
    }

    CFunction* fn;
    auto it = prog_.function_index.find(name);
    if (it == prog_.function_index.end()) {
      prog_.function_index[name] = prog_.functions.size();
      prog_.functions.push_back(CFunction{name, ret, params, {}, nullptr, loc});
      fn = &prog_.functions.back();
    } else {
      fn = &prog_.functions[it->second];
      if (fn->params.size() != params.size())
        throw ParseError(DiagCode::SignatureMismatch, loc,
                         "conflicting declarations of '" + name + "'");
    }
    for (auto& s : specs) fn->specs.push_back(std::move(s));

    if (cur.accept(";")) return;
    if (!cur.peek().is("{")) cur.fail("expected ';' or function body");
    if (fn->body)
      throw ParseError(DiagCode::DuplicateDefinition, loc,
                       "function '" + name + "' already has a definition");
    fn->params = params; // definition's parameter names win
    fn->body = parse_block(cur);
  }

  CStmtPtr parse_block(Cursor& cur) {
    auto block = std::make_shared<CStmt>();
    block->kind = CStmt::Kind::Block;
    block->loc = cur.peek().loc;
    cur.expect("{");
    // Inv annotations attach to the following loop; every other command is a
    // standalone annotation statement executed in order.
    std::vector<Annot> pending_inv;
    while (!cur.peek().is("}")) {
      if (cur.at_eof()) cur.fail("unterminated block");
      if (cur.peek().kind == Token::Kind::AnnotStart) {
        SourceLoc aloc = cur.next().loc;
        if (cur.peek().is_ident("where"))
          throw ParseError(DiagCode::SyntaxError, aloc,
                           "'where' annotations attach to a call, not a statement");
        Annot a = parse_annotation_command(cur, aloc);
        if (a.kind == Annot::Kind::Inv) {
          pending_inv.push_back(std::move(a));
        } else {
          auto as = std::make_shared<CStmt>();
          as->kind = CStmt::Kind::Annot;
          as->loc = a.loc;
          as->annots.push_back(std::move(a));
          block->items.push_back(std::move(as));
        }
        continue;
      }
      CStmtPtr stmt = parse_stmt(cur);
      if (!pending_inv.empty()) {
        if (stmt->kind != CStmt::Kind::While && stmt->kind != CStmt::Kind::For &&
            stmt->kind != CStmt::Kind::DoWhile)
          throw ParseError(DiagCode::SyntaxError, pending_inv.front().loc,
                           "'Inv' annotation must precede a loop");
        for (auto& a : pending_inv) stmt->annots.push_back(std::move(a));
        pending_inv.clear();
      }
      block->items.push_back(std::move(stmt));
    }
    cur.expect("}");
    if (!pending_inv.empty())
      throw ParseError(DiagCode::SyntaxError, pending_inv.front().loc,
                       "'Inv' annotation has no following loop");
    return block;
  }

  CStmtPtr parse_stmt(Cursor& cur) {
    SourceLoc loc = cur.peek().loc;
    auto s = std::make_shared<CStmt>();
    s->loc = loc;

    if (cur.peek().is("{")) return parse_block(cur);
    if (cur.accept(";")) {
      s->kind = CStmt::Kind::Empty;
      return s;
    }
    if (cur.peek().is_ident("goto")) unsupported(DiagCode::UnsupportedGoto, loc, "goto");
    if (cur.accept_ident("break")) {
      cur.expect(";");
      s->kind = CStmt::Kind::Break;
      return s;
    }
    if (cur.accept_ident("continue")) {
      cur.expect(";");
      s->kind = CStmt::Kind::Continue;
      return s;
    }
    if (cur.accept_ident("return")) {
      s->kind = CStmt::Kind::Return;
      if (!cur.peek().is(";")) s->expr = parse_expr(cur);
      expect_semi_with_comma_check(cur);
      return s;
    }
    if (cur.accept_ident("if")) {
      s->kind = CStmt::Kind::If;
      cur.expect("(");
      s->cond = parse_expr(cur);
      cur.expect(")");
      s->then_branch = parse_stmt(cur);
      if (cur.accept_ident("else")) s->else_branch = parse_stmt(cur);
      return s;
    }
    if (cur.accept_ident("while")) {
      s->kind = CStmt::Kind::While;
      cur.expect("(");
      s->cond = parse_expr(cur);
      cur.expect(")");
      s->body = parse_stmt(cur);
      return s;
    }
    if (cur.accept_ident("do")) {
      s->kind = CStmt::Kind::DoWhile;
      s->body = parse_stmt(cur);
      if (!cur.accept_ident("while")) cur.fail("expected 'while' after do-body");
      cur.expect("(");
      s->cond = parse_expr(cur);
      cur.expect(")");
      cur.expect(";");
      return s;
    }
    if (cur.accept_ident("for")) {
      s->kind = CStmt::Kind::For;
      cur.expect("(");
      if (!cur.peek().is(";")) {
        if (is_type_start(cur)) s->init = parse_decl_stmt(cur);
        else {
          s->init = expr_stmt(parse_expr(cur), loc);
          expect_semi_with_comma_check(cur);
        }
      } else {
        cur.expect(";");
      }
      if (!cur.peek().is(";")) s->cond = parse_expr(cur);
      cur.expect(";");
      if (!cur.peek().is(")")) s->step = parse_expr(cur);
      cur.expect(")");
      s->body = parse_stmt(cur);
      return s;
    }
    if (cur.accept_ident("switch")) {
      s->kind = CStmt::Kind::Switch;
      cur.expect("(");
      s->cond = parse_expr(cur);
      cur.expect(")");
      parse_switch_body(cur, *s);
      return s;
    }
    if (is_type_start(cur)) return parse_decl_stmt(cur);

    // expression statement, possibly with a trailing where-annotation
    s->kind = CStmt::Kind::Expr;
    s->expr = parse_expr(cur);
    if (cur.peek().kind == Token::Kind::AnnotStart) {
      SourceLoc aloc = cur.next().loc;
      if (!cur.accept_ident("where"))
        throw ParseError(DiagCode::SyntaxError, aloc,
                         "only 'where' annotations may follow an expression");
      s->where = parse_where_clause(cur, aloc);
    }
    expect_semi_with_comma_check(cur);
    return s;
  }

  void expect_semi_with_comma_check(Cursor& cur) {
    if (cur.peek().is(","))
      unsupported(DiagCode::UnsupportedCommaOperator, cur.peek().loc, "comma operator");
    cur.expect(";");
  }

  CStmtPtr expr_stmt(CExprPtr e, SourceLoc loc) {
    auto s = std::make_shared<CStmt>();
    s->kind = CStmt::Kind::Expr;
    s->loc = std::move(loc);
    s->expr = std::move(e);
    return s;
  }

  CStmtPtr parse_decl_stmt(Cursor& cur) {
    auto s = std::make_shared<CStmt>();
    s->kind = CStmt::Kind::Decl;
    s->loc = cur.peek().loc;
    CTypePtr base = parse_type_specifier(cur);
    s->decl_type = parse_pointers(cur, base);
    s->decl_name = cur.expect_ident("variable name");
    if (cur.peek().is("["))
      unsupported(DiagCode::UnsupportedFeature, s->loc, "local array declaration");
    if (cur.accept("=")) s->expr = parse_expr(cur);
    if (cur.peek().is(","))
      unsupported(DiagCode::UnsupportedFeature, cur.peek().loc,
                  "multiple declarators in one declaration");
    cur.expect(";");
    return s;
  }

  void parse_switch_body(Cursor& cur, CStmt& s) {
    cur.expect("{");
    SwitchCase* current = nullptr;
    while (!cur.accept("}")) {
      if (cur.at_eof()) cur.fail("unterminated switch");
      SourceLoc loc = cur.peek().loc;
      if (cur.accept_ident("case")) {
        std::int64_t v;
        if (cur.peek().kind == Token::Kind::Ident) {
          auto it = enum_constants_.find(cur.peek().text);
          if (it == enum_constants_.end()) cur.fail("unknown enum constant in case label");
          v = it->second;
          cur.next();
        } else {
          v = cur.expect_int("case label");
        }
        cur.expect(":");
        if (current && current->stmts.empty()) {
          current->values.push_back(v); // stacked labels share an entry
        } else {
          s.cases.push_back(SwitchCase{{v}, false, {}, loc});
          current = &s.cases.back();
        }
        continue;
      }
      if (cur.accept_ident("default")) {
        cur.expect(":");
        if (current && current->stmts.empty()) {
          current->is_default = true;
        } else {
          s.cases.push_back(SwitchCase{{}, true, {}, loc});
          current = &s.cases.back();
        }
        continue;
      }
      if (!current) cur.fail("statement before first case label in switch");
      if (cur.peek().kind == Token::Kind::AnnotStart) {
        SourceLoc aloc = cur.next().loc;
        Annot a = parse_annotation_command(cur, aloc);
        auto as = std::make_shared<CStmt>();
        as->kind = CStmt::Kind::Annot;
        as->loc = aloc;
        as->annots.push_back(std::move(a));
        current->stmts.push_back(std::move(as));
        continue;
      }
      current->stmts.push_back(parse_stmt(cur));
    }
  }

  // ----- expressions (standard C precedence, no comma operator) -----

  CExprPtr parse_expr(Cursor& cur) { return parse_assignment(cur); }

  CExprPtr parse_assignment(Cursor& cur) {
    CExprPtr lhs = parse_conditional(cur);
    const Token& t = cur.peek();
    if (t.is("=") || t.is("+=") || t.is("-=") || t.is("*=") || t.is("/=") || t.is("%=")) {
      std::string op = cur.next().text;
      CExprPtr rhs = parse_assignment(cur);
      auto e = CExpr::make(CExpr::Kind::Assign, lhs->loc);
      auto m = std::const_pointer_cast<CExpr>(e);
      m->name = op;
      m->args = {lhs, rhs};
      return e;
    }
    return lhs;
  }

  CExprPtr parse_conditional(Cursor& cur) {
    CExprPtr c = parse_binary(cur, 0);
    if (cur.accept("?")) {
      CExprPtr a = parse_assignment(cur);
      cur.expect(":");
      CExprPtr b = parse_conditional(cur);
      auto e = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Cond, c->loc));
      e->args = {c, a, b};
      return e;
    }
    return c;
  }

  int binop_prec(const Token& t) {
    if (t.kind != Token::Kind::Punct) return -1;
    const std::string& s = t.text;
    if (s == "||") return 1;
    if (s == "&&") return 2;
    if (s == "|") return 3;
    if (s == "^") return 4;
    if (s == "&") return 5;
    if (s == "==" || s == "!=") return 6;
    if (s == "<" || s == "<=" || s == ">" || s == ">=") return 7;
    if (s == "<<" || s == ">>") return 8;
    if (s == "+" || s == "-") return 9;
    if (s == "*" || s == "/" || s == "%") return 10;
    return -1;
  }

  CExprPtr parse_binary(Cursor& cur, int min_prec) {
    CExprPtr lhs = parse_unary(cur);
    for (;;) {
      int prec = binop_prec(cur.peek());
      if (prec < 0 || prec < min_prec) return lhs;
      std::string op = cur.next().text;
      CExprPtr rhs = parse_binary(cur, prec + 1);
      auto e = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Binary, lhs->loc));
      e->name = op;
      e->args = {lhs, rhs};
      lhs = e;
    }
  }

  CExprPtr parse_unary(Cursor& cur) {
    const Token& t = cur.peek();
    SourceLoc loc = t.loc;
    if (t.is("-") || t.is("!") || t.is("~") || t.is("*") || t.is("&") || t.is("++") ||
        t.is("--")) {
      std::string op = cur.next().text;
      auto e = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Unary, loc));
      e->name = op;
      e->args = {parse_unary(cur)};
      return e;
    }
    return parse_postfix(cur);
  }

  CExprPtr parse_postfix(Cursor& cur) {
    CExprPtr e = parse_primary(cur);
    for (;;) {
      SourceLoc loc = cur.peek().loc;
      if (cur.peek().is("->") || cur.peek().is(".")) {
        bool arrow = cur.next().text == "->";
        auto m = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Member, loc));
        m->arrow = arrow;
        m->name = cur.expect_ident("field name");
        m->args = {e};
        e = m;
        continue;
      }
      if (cur.accept("[")) {
        auto m = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Index, loc));
        m->args = {e, parse_expr(cur)};
        cur.expect("]");
        e = m;
        continue;
      }
      if (cur.peek().is("++") || cur.peek().is("--")) {
        auto m = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Postfix, loc));
        m->name = cur.next().text;
        m->args = {e};
        e = m;
        continue;
      }
      if (cur.peek().is("(") && e->kind == CExpr::Kind::Var) {
        cur.next();
        auto m = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Call, e->loc));
        m->name = e->name;
        if (!cur.peek().is(")")) {
          do {
            m->args.push_back(parse_expr(cur));
          } while (cur.accept(","));
        }
        cur.expect(")");
        e = m;
        continue;
      }
      return e;
    }
  }

  CExprPtr parse_primary(Cursor& cur) {
    const Token& t = cur.peek();
    SourceLoc loc = t.loc;
    if (t.kind == Token::Kind::Int) {
      cur.next();
      auto e = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::IntLit, loc));
      e->int_val = t.int_val;
      return e;
    }
    if (t.is("(")) {
      cur.next();
      // cast or parenthesized expression
      if (is_type_start(cur)) {
        parse_type_specifier(cur);
        parse_pointers(cur, CType::int_type());
        cur.expect(")");
        if (cur.peek().is("{"))
          unsupported(DiagCode::UnsupportedCompoundLiteral, loc, "compound literal");
        return parse_unary(cur); // cast is an identity in the logic
      }
      CExprPtr e = parse_expr(cur);
      cur.expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "sizeof")
        unsupported(DiagCode::UnsupportedFeature, loc, "sizeof");
      cur.next();
      auto e = std::const_pointer_cast<CExpr>(CExpr::make(CExpr::Kind::Var, loc));
      e->name = t.text;
      if (enum_constants_.count(t.text)) {
        e->kind = CExpr::Kind::IntLit;
        e->int_val = enum_constants_.at(t.text);
      }
      return e;
    }
    cur.fail("expected expression");
  }

  AnnotatedProgram& prog_;
  const IncludeLoader& loader_;
  std::map<std::string, CTypePtr> typedefs_;
  std::map<std::string, std::int64_t> enum_constants_;
  std::set<std::string> included_;
  int anon_counter_ = 0;
};

} // namespace

AnnotatedProgram parse_source(const std::string& text, const std::string& filename,
                              const IncludeLoader& loader) {
  AnnotatedProgram prog;
  CParser p(prog, loader);
  p.parse_file(text, filename);
  return prog;
}

// ---------------------------------------------------------------------------
// convenience entry points

namespace {

Cursor annot_cursor(const std::string& text, const std::string& filename) {
  return Cursor(lex(text, filename, /*annotation_mode=*/true));
}

} // namespace

Assertion parse_assertion_text(const std::string& text, const std::string& filename) {
  Cursor cur = annot_cursor(text, filename);
  FormulaParser fp(cur);
  Assertion a = fp.parse_assertion();
  if (!cur.at_eof()) cur.fail("unexpected trailing content");
  return a;
}

SymbolicHeap parse_heap_text(const std::string& text, const std::string& filename) {
  Cursor cur = annot_cursor(text, filename);
  FormulaParser fp(cur);
  SymbolicHeap h = fp.parse_heap();
  if (!cur.at_eof()) cur.fail("unexpected trailing content");
  return h;
}

TermPtr parse_term_text(const std::string& text, const std::string& filename) {
  Cursor cur = annot_cursor(text, filename);
  FormulaParser fp(cur);
  TermPtr t = fp.parse_term();
  if (!cur.at_eof()) cur.fail("unexpected trailing content");
  return t;
}

PurePtr parse_pure_text(const std::string& text, const std::string& filename) {
  Cursor cur = annot_cursor(text, filename);
  FormulaParser fp(cur);
  PurePtr p = fp.parse_pure_formula();
  if (!cur.at_eof()) cur.fail("unexpected trailing content");
  return p;
}

// ---------------------------------------------------------------------------
// program printer (round-trip support)

namespace {

class ProgramPrinter {
public:
  std::string run(const AnnotatedProgram& prog) {
    for (const auto& e : prog.enums) print_enum(e);
    for (const auto& s : prog.structs) print_struct(s);
    for (const auto& [name, t] : prog.typedefs)
      line("typedef " + ctype_str(t) + " " + name + ";");
    for (const auto& f : prog.functions) print_function(f);
    return os_.str();
  }

private:
  void indent() {
    for (int i = 0; i < depth_; ++i) os_ << "    ";
  }
  void line(const std::string& s) {
    indent();
    os_ << s << "\n";
  }

  void print_enum(const EnumDef& e) {
    indent();
    os_ << "enum " << e.tag << " { ";
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      if (i) os_ << ", ";
      os_ << e.items[i].first << " = " << e.items[i].second;
    }
    os_ << " };\n";
  }

  void print_struct(const StructDef& s) {
    line("struct " + s.tag + " {");
    depth_++;
    for (const auto& f : s.fields) line(ctype_str(f.type) + " " + f.name + ";");
    depth_--;
    line("};");
  }

  std::string annot_str(const Annot& a) {
    std::ostringstream o;
    o << "/*@ ";
    switch (a.kind) {
      case Annot::Kind::AssertFull:
        o << "Assert " << print_assertion(a.assertion);
        break;
      case Annot::Kind::AssertPartial:
        o << print_assertion(a.assertion);
        break;
      case Annot::Kind::WhichImplies:
        o << print_assertion(a.assertion) << " which implies " << print_assertion(a.post);
        break;
      case Annot::Kind::Inv:
        o << "Inv " << (a.full ? "Assert " : "") << print_assertion(a.assertion);
        if (!a.entry_map.empty()) {
          o << " with ";
          for (std::size_t i = 0; i < a.entry_map.size(); ++i) {
            if (i) o << ", ";
            o << a.entry_map[i].from << " -> " << a.entry_map[i].to;
          }
        }
        break;
      case Annot::Kind::BranchName: {
        o << "Branch name ";
        for (std::size_t i = 0; i < a.name_cases.size(); ++i) {
          if (i) o << "; ";
          o << a.name_cases[i].first << ": " << print_pure(a.name_cases[i].second);
        }
        if (a.rest_name) o << "; " << *a.rest_name;
        break;
      }
      case Annot::Kind::BranchJoin: {
        o << "Branch join ";
        for (std::size_t i = 0; i < a.join_sources.size(); ++i) {
          if (i) o << ", ";
          o << a.join_sources[i];
        }
        o << " -> " << a.target;
        break;
      }
      case Annot::Kind::BranchClear:
        o << "Branch clear " << a.var;
        break;
      case Annot::Kind::BranchTransition:
        o << "Branch transition " << a.source << " -> " << a.target;
        break;
      case Annot::Kind::Destruct:
        o << "Destruct " << a.var;
        break;
    }
    if (!a.filter.empty()) {
      o << " $ ";
      for (std::size_t i = 0; i < a.filter.size(); ++i) {
        if (i) o << ", ";
        o << a.filter[i];
      }
    }
    o << " */";
    return o.str();
  }

  std::string expr_str(const CExprPtr& e) {
    switch (e->kind) {
      case CExpr::Kind::IntLit: return std::to_string(e->int_val);
      case CExpr::Kind::Var: return e->name;
      case CExpr::Kind::Unary: return "(" + e->name + expr_str(e->args[0]) + ")";
      case CExpr::Kind::Binary:
        return "(" + expr_str(e->args[0]) + " " + e->name + " " + expr_str(e->args[1]) + ")";
      case CExpr::Kind::Postfix: return "(" + expr_str(e->args[0]) + e->name + ")";
      case CExpr::Kind::Call: {
        std::string s = e->name + "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          if (i) s += ", ";
          s += expr_str(e->args[i]);
        }
        return s + ")";
      }
      case CExpr::Kind::Member:
        return "(" + expr_str(e->args[0]) + ")" + (e->arrow ? "->" : ".") + e->name;
      case CExpr::Kind::Index:
        return "(" + expr_str(e->args[0]) + ")[" + expr_str(e->args[1]) + "]";
      case CExpr::Kind::Cond:
        return "(" + expr_str(e->args[0]) + " ? " + expr_str(e->args[1]) + " : " +
               expr_str(e->args[2]) + ")";
      case CExpr::Kind::Assign:
        return expr_str(e->args[0]) + " " + e->name + " " + expr_str(e->args[1]);
    }
    return "?";
  }

  void print_stmt(const CStmt& s) {
    for (const auto& a : s.annots)
      if (a.kind == Annot::Kind::Inv) line(annot_str(a));
    switch (s.kind) {
      case CStmt::Kind::Empty: line(";"); break;
      case CStmt::Kind::Annot: line(annot_str(s.annots[0])); break;
      case CStmt::Kind::Decl: {
        std::string d = ctype_str(s.decl_type) + " " + s.decl_name;
        if (s.expr) d += " = " + expr_str(s.expr);
        line(d + ";");
        break;
      }
      case CStmt::Kind::Expr: {
        std::string t = expr_str(s.expr);
        if (s.where) {
          t += " /*@ where ";
          for (const auto& [spec, br] : s.where->entries) {
            t += "(" + spec + ")";
            if (br) t += " $ " + *br;
            t += " ";
          }
          t += "*/";
        }
        line(t + ";");
        break;
      }
      case CStmt::Kind::If:
        line("if (" + expr_str(s.cond) + ")");
        print_substmt(s.then_branch);
        if (s.else_branch) {
          line("else");
          print_substmt(s.else_branch);
        }
        break;
      case CStmt::Kind::While:
        line("while (" + expr_str(s.cond) + ")");
        print_substmt(s.body);
        break;
      case CStmt::Kind::DoWhile:
        line("do");
        print_substmt(s.body);
        line("while (" + expr_str(s.cond) + ");");
        break;
      case CStmt::Kind::For: {
        std::string init;
        if (s.init && s.init->kind == CStmt::Kind::Decl) {
          init = ctype_str(s.init->decl_type) + " " + s.init->decl_name;
          if (s.init->expr) init += " = " + expr_str(s.init->expr);
        } else if (s.init && s.init->expr) {
          init = expr_str(s.init->expr);
        }
        line("for (" + init + "; " + (s.cond ? expr_str(s.cond) : "") + "; " +
             (s.step ? expr_str(s.step) : "") + ")");
        print_substmt(s.body);
        break;
      }
      case CStmt::Kind::Switch:
        line("switch (" + expr_str(s.cond) + ") {");
        depth_++;
        for (const auto& c : s.cases) {
          for (auto v : c.values) line("case " + std::to_string(v) + ":");
          if (c.is_default) line("default:");
          depth_++;
          for (const auto& st : c.stmts) print_stmt(*st);
          depth_--;
        }
        depth_--;
        line("}");
        break;
      case CStmt::Kind::Break: line("break;"); break;
      case CStmt::Kind::Continue: line("continue;"); break;
      case CStmt::Kind::Return:
        line(s.expr ? "return " + expr_str(s.expr) + ";" : "return;");
        break;
      case CStmt::Kind::Block:
        line("{");
        depth_++;
        for (const auto& st : s.items) print_stmt(*st);
        depth_--;
        line("}");
        break;
    }
  }

  void print_substmt(const CStmtPtr& s) {
    if (s->kind == CStmt::Kind::Block) {
      print_stmt(*s);
    } else {
      depth_++;
      print_stmt(*s);
      depth_--;
    }
  }

  void print_function(const CFunction& f) {
    std::ostringstream sig;
    sig << ctype_str(f.ret) << " " << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) sig << ", ";
      sig << ctype_str(f.params[i].type) << " " << f.params[i].name;
    }
    sig << ")";
    if (f.specs.empty() && !f.body) {
      line(sig.str() + ";");
      return;
    }
    line(sig.str());
    for (const auto& s : f.specs) {
      std::ostringstream o;
      o << "/*@ ";
      if (s.name) {
        o << *s.name;
        if (s.base) o << " <= " << *s.base;
        o << " ";
      }
      if (!s.with_vars.empty()) {
        o << "With";
        for (const auto& v : s.with_vars) o << " " << v;
        o << " ";
      }
      o << "Require " << print_assertion(s.require) << " Ensure " << print_assertion(s.ensure)
        << " */";
      line(o.str());
    }
    if (f.body) print_stmt(*f.body);
    else line(";");
  }

  std::ostringstream os_;
  int depth_ = 0;
};

} // namespace

std::string print_program(const AnnotatedProgram& prog) { return ProgramPrinter().run(prog); }

} // namespace sepveri

