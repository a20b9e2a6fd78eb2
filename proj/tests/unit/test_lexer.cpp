#include "doctest.h"
#include "sepveri/lexer.hpp"

using namespace sepveri;

TEST_CASE("lexes C tokens with annotations") {
  auto toks = lex("int x = 10; /*@ listrep(x) */ y->next", "t.c");
  REQUIRE(toks.size() >= 13);
  CHECK(toks[0].is_ident("int"));
  CHECK(toks[1].is_ident("x"));
  CHECK(toks[2].is("="));
  CHECK(toks[3].int_val == 10);
  CHECK(toks[5].kind == Token::Kind::AnnotStart);
  CHECK(toks[6].is_ident("listrep"));
  CHECK(toks[10].kind == Token::Kind::AnnotEnd);
  CHECK(toks[12].is("->"));
}

TEST_CASE("annotation identifiers may carry primes") {
  auto toks = lex("l == cons(a, l')", "t.logic", true);
  REQUIRE(toks.size() > 6);
  CHECK(toks[6].is_ident("l'"));
}

TEST_CASE("line and column tracking") {
  auto toks = lex("a\n  bb\n", "t.c");
  CHECK(toks[0].loc.line == 1);
  CHECK(toks[0].loc.column == 1);
  CHECK(toks[1].loc.line == 2);
  CHECK(toks[1].loc.column == 3);
}

TEST_CASE("string literals are rejected with the dedicated code") {
  try {
    lex("char *s = \"hi\";", "t.c");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::UnsupportedStringLiteral);
  }
}

TEST_CASE("float literals are rejected") {
  try {
    lex("x = 1.5;", "t.c");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code == DiagCode::UnsupportedFloat);
  }
}

TEST_CASE("include directives become tokens") {
  auto toks = lex("#include \"defs.h\"\nint f();", "t.c");
  CHECK(toks[0].kind == Token::Kind::Include);
  CHECK(toks[0].text == "defs.h");
  CHECK(toks[1].is_ident("int"));
}

TEST_CASE("block comments are skipped, annotation comments are not") {
  auto toks = lex("/* plain */ a /*@ b */", "t.c");
  CHECK(toks[0].is_ident("a"));
  CHECK(toks[1].kind == Token::Kind::AnnotStart);
  CHECK(toks[2].is_ident("b"));
}

TEST_CASE("hex literals") {
  auto toks = lex("0x10", "t.c");
  CHECK(toks[0].int_val == 16);
}
