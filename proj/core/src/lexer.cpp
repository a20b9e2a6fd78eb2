#include "sepveri/lexer.hpp"

#include <cctype>

namespace sepveri {

namespace {

const char* kPuncts[] = {
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", ":=", "=>", "(",  ")",  "{",  "}",
    "[",  "]",  ";",  ",",  ".",  "+",  "-",  "*",  "/",  "%",  "&",
    "|",  "^",  "~",  "!",  "<",  ">",  "=",  "?",  ":",  "$",  "@",
};

class Lexer {
public:
  Lexer(const std::string& src, std::string file, bool annotation_mode)
      : src_(src), file_(std::move(file)), in_annot_(annotation_mode),
        whole_file_annot_(annotation_mode) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      SourceLoc loc = here();
      if (pos_ >= src_.size()) {
        out.push_back({Token::Kind::Eof, "", 0, loc});
        return out;
      }
      char c = src_[pos_];
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_ident(loc));
        continue;
      }
      if (isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_number(loc));
        continue;
      }
      if (c == '"' || c == '\'') {
        if (in_annot_ && c == '\'')
          throw ParseError(DiagCode::SyntaxError, loc, "stray prime");
        throw ParseError(DiagCode::UnsupportedStringLiteral, loc,
                         "string and character literals are not supported");
      }
      if (c == '#') {
        out.push_back(lex_directive(loc));
        continue;
      }
      if (!in_annot_ && starts_with("/*@")) {
        pos_ += 3;
        col_ += 3;
        in_annot_ = true;
        out.push_back({Token::Kind::AnnotStart, "/*@", 0, loc});
        continue;
      }
      if (in_annot_ && !whole_file_annot_ && starts_with("*/")) {
        pos_ += 2;
        col_ += 2;
        in_annot_ = false;
        out.push_back({Token::Kind::AnnotEnd, "*/", 0, loc});
        continue;
      }
      bool matched = false;
      for (const char* p : kPuncts) {
        if (starts_with(p)) {
          std::size_t n = std::char_traits<char>::length(p);
          // inside annotations a lone '*' before '/' is the closer, not a punct
          if (in_annot_ && !whole_file_annot_ && p[0] == '*' && n == 1 &&
              pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')
            continue;
          pos_ += n;
          col_ += static_cast<int>(n);
          out.push_back({Token::Kind::Punct, p, 0, loc});
          matched = true;
          break;
        }
      }
      if (!matched)
        throw ParseError(DiagCode::SyntaxError, loc,
                         std::string("unexpected character '") + c + "'");
    }
  }

private:
  bool starts_with(const char* s) const {
    std::size_t n = std::char_traits<char>::length(s);
    return src_.compare(pos_, n, s) == 0;
  }

  SourceLoc here() const { return SourceLoc{file_, line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < src_.size() && isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (starts_with("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (!in_annot_ && starts_with("/*") && !starts_with("/*@")) {
        SourceLoc loc = here();
        advance();
        advance();
        while (pos_ < src_.size() && !starts_with("*/")) advance();
        if (pos_ >= src_.size())
          throw ParseError(DiagCode::SyntaxError, loc, "unterminated comment");
        advance();
        advance();
        continue;
      }
      return;
    }
  }

  Token lex_ident(SourceLoc loc) {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      advance();
    if (in_annot_)
      while (pos_ < src_.size() && src_[pos_] == '\'') advance();
    return {Token::Kind::Ident, src_.substr(start, pos_ - start), 0, loc};
  }

  Token lex_number(SourceLoc loc) {
    std::size_t start = pos_;
    int base = 10;
    if (starts_with("0x") || starts_with("0X")) {
      base = 16;
      advance();
      advance();
    }
    while (pos_ < src_.size() &&
           (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      advance();
    if (in_annot_)
      while (pos_ < src_.size() && src_[pos_] == '\'') advance();
    if (pos_ < src_.size() && src_[pos_] == '.')
      throw ParseError(DiagCode::UnsupportedFloat, loc,
                       "floating-point literals are not supported");
    std::string text = src_.substr(start, pos_ - start);
    std::string digits = base == 16 ? text.substr(2) : text;
    while (!digits.empty() &&
           (tolower(static_cast<unsigned char>(digits.back())) == 'u' ||
            tolower(static_cast<unsigned char>(digits.back())) == 'l'))
      digits.pop_back();
    auto is_digit_for_base = [&](char c) {
      return base == 16 ? isxdigit(static_cast<unsigned char>(c)) != 0
                        : isdigit(static_cast<unsigned char>(c)) != 0;
    };
    bool all_digits = !digits.empty();
    for (char c : digits)
      if (!is_digit_for_base(c)) all_digits = false;
    if (!all_digits) {
      // digit-leading identifiers (branch names like 2dlist) are legal in
      // annotations only
      if (in_annot_) return {Token::Kind::Ident, text, 0, loc};
      throw ParseError(DiagCode::SyntaxError, loc, "malformed integer literal " + text);
    }
    try {
      std::int64_t v = std::stoll(digits, nullptr, base);
      return {Token::Kind::Int, text, v, loc};
    } catch (...) {
      throw ParseError(DiagCode::SyntaxError, loc, "malformed integer literal " + text);
    }
  }

  Token lex_directive(SourceLoc loc) {
    // only `#include "path"` is supported
    std::size_t line_end = src_.find('\n', pos_);
    std::string line = src_.substr(
        pos_, line_end == std::string::npos ? std::string::npos : line_end - pos_);
    while (pos_ < src_.size() && src_[pos_] != '\n') advance();
    std::size_t inc = line.find("include");
    if (inc == std::string::npos)
      throw ParseError(DiagCode::UnsupportedFeature, loc,
                       "preprocessor directives other than #include are not supported");
    std::size_t q1 = line.find('"', inc);
    std::size_t q2 = q1 == std::string::npos ? std::string::npos : line.find('"', q1 + 1);
    if (q1 == std::string::npos || q2 == std::string::npos)
      throw ParseError(DiagCode::UnsupportedFeature, loc,
                       "#include requires a quoted file name");
    return {Token::Kind::Include, line.substr(q1 + 1, q2 - q1 - 1), 0, loc};
  }

  const std::string& src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool in_annot_ = false;
  bool whole_file_annot_ = false;
};

} // namespace

std::vector<Token> lex(const std::string& source, const std::string& filename,
                       bool annotation_mode) {
  return Lexer(source, filename, annotation_mode).run();
}

} // namespace sepveri
