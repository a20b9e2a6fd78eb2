#pragma once

#include "sepveri/cast.hpp"
#include "sepveri/lexer.hpp"

#include <functional>
#include <optional>
#include <string>

namespace sepveri {

class Cursor {
public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) pos_++;
    return t;
  }
  bool at_eof() const { return peek().kind == Token::Kind::Eof; }
  bool accept(const char* punct) {
    if (peek().is(punct)) {
      next();
      return true;
    }
    return false;
  }
  bool accept_ident(const char* s) {
    if (peek().is_ident(s)) {
      next();
      return true;
    }
    return false;
  }
  void expect(const char* punct);
  std::string expect_ident(const char* what);
  std::int64_t expect_int(const char* what);
  [[noreturn]] void fail(const std::string& msg) const;

  std::size_t mark() const { return pos_; }
  void rewind(std::size_t m) { pos_ = m; }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Parser for the annotation formula grammar (terms, pure/spatial atoms,
// symbolic heaps, named multi-branch assertions). Shared by the C-source
// annotation parser, the .logic parser, and the .strat parser.
class FormulaParser {
public:
  explicit FormulaParser(Cursor& cur, bool pattern_mode = false)
      : cur_(cur), pattern_mode_(pattern_mode) {}

  TermPtr parse_term();
  PurePtr parse_pure_formula(); // comparisons composed with && || !
  Assertion parse_assertion();  // branch ('||' branch)*
  SymbolicHeap parse_heap();

  // One pattern formula (Stellis): a single pure or spatial atom.
  struct SingleFormula {
    bool spatial = false;
    PurePtr pure;
    SpatialAtom atom;
  };
  SingleFormula parse_single_formula();

private:
  struct ParsedAtom {
    enum class Kind { Pure, Spatial, BareTerm } kind;
    PurePtr pure;
    SpatialAtom spatial;
    TermPtr term;
  };

  TermPtr parse_primary();
  TermPtr parse_unary();
  TermPtr parse_mul(bool top_level, bool after_relop);
  TermPtr parse_add(bool top_level, bool after_relop);
  ParsedAtom parse_atom();
  PurePtr atom_to_pure(const ParsedAtom& a);

  bool is_deref_form(const TermPtr& t) const;

  Cursor& cur_;
  bool pattern_mode_;
};

using IncludeLoader =
    std::function<std::optional<std::string>(const std::string& path, const std::string& from)>;

/// Parses one annotated C translation unit (resolving #include via `loader`).
AnnotatedProgram parse_source(const std::string& text, const std::string& filename,
                              const IncludeLoader& loader = {});

/// Pretty-prints the program in the annotation syntax; parse(print(p)) is
/// structurally equal to p.
std::string print_program(const AnnotatedProgram& prog);

// test/tool conveniences
Assertion parse_assertion_text(const std::string& text, const std::string& filename = "<anno>");
SymbolicHeap parse_heap_text(const std::string& text, const std::string& filename = "<anno>");
TermPtr parse_term_text(const std::string& text, const std::string& filename = "<anno>");
PurePtr parse_pure_text(const std::string& text, const std::string& filename = "<anno>");

} // namespace sepveri
