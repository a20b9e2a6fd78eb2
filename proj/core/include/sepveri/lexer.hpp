#pragma once

#include "sepveri/diag.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sepveri {

struct Token {
  enum class Kind { Ident, Int, Punct, AnnotStart, AnnotEnd, Include, Eof } kind;
  std::string text;       // ident spelling, punct spelling, include path
  std::int64_t int_val = 0;
  SourceLoc loc;

  bool is(const char* punct) const { return kind == Kind::Punct && text == punct; }
  bool is_ident(const char* s) const { return kind == Kind::Ident && text == s; }
};

// Tokenizes C-with-annotations sources as well as .logic and .strat files
// (`annotation_mode` starts the whole file under annotation lexing rules,
// where identifiers may carry prime suffixes like l').
std::vector<Token> lex(const std::string& source, const std::string& filename,
                       bool annotation_mode = false);

} // namespace sepveri
