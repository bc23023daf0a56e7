#include "pa/parse.hpp"

#include <cctype>

namespace pa {

namespace {

enum class Tok { Ident, Plus, Dot, Par, LMerge, CMerge, LParen, RParen, End };

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  Tok tok = Tok::End;
  std::string ident;
  int tok_pos = 0;

  explicit Lexer(const std::string& t) : text(t) { next(); }

  void next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tok_pos = static_cast<int>(pos);
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = text[pos];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t b = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      ident = text.substr(b, pos - b);
      tok = Tok::Ident;
      return;
    }
    switch (c) {
      case '+': ++pos; tok = Tok::Plus; return;
      case '.': ++pos; tok = Tok::Dot; return;
      case '(': ++pos; tok = Tok::LParen; return;
      case ')': ++pos; tok = Tok::RParen; return;
      case '|':
        if (pos + 1 < text.size() && text[pos + 1] == '|') {
          pos += 2;
          tok = Tok::Par;
        } else if (pos + 1 < text.size() && text[pos + 1] == '_') {
          pos += 2;
          tok = Tok::LMerge;
        } else {
          ++pos;
          tok = Tok::CMerge;
        }
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         static_cast<int>(pos));
    }
  }
};

struct Parser {
  Lexer lex;
  System system;
  const SemanticsConfig* cfg;

  Parser(const std::string& text, System sys, const SemanticsConfig* c)
      : lex(text), system(sys), cfg(c) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lex.tok_pos); }

  TermPtr parse() {
    TermPtr t = sum();
    if (lex.tok != Tok::End) fail("trailing input");
    return t;
  }

  TermPtr sum() {
    TermPtr t = parlevel();
    while (lex.tok == Tok::Plus) {
      lex.next();
      t = plus(t, parlevel());
    }
    return t;
  }

  TermPtr parlevel() {
    TermPtr t = seqlevel();
    Tok kind = Tok::End;
    while (lex.tok == Tok::Par || lex.tok == Tok::LMerge || lex.tok == Tok::CMerge) {
      Tok cur = lex.tok;
      if (system == System::PA1 && cur != Tok::Par)
        fail(cur == Tok::LMerge ? "operator |_ is not in PA1"
                                : "operator | is not in PA1");
      if (kind != Tok::End && cur != kind)
        fail("mixing parallel operators at one level requires parentheses");
      kind = cur;
      lex.next();
      TermPtr rhs = seqlevel();
      Op op = cur == Tok::Par ? Op::Par : cur == Tok::LMerge ? Op::LMerge : Op::CMerge;
      t = binop(op, t, rhs);
    }
    return t;
  }

  TermPtr seqlevel() {
    TermPtr t = atomlevel();
    while (lex.tok == Tok::Dot) {
      lex.next();
      t = seq(t, atomlevel());
    }
    return t;
  }

  TermPtr atomlevel() {
    if (lex.tok == Tok::Ident) {
      std::string name = lex.ident;
      if (cfg && !cfg->in_alphabet(name)) fail("unknown label: " + name);
      lex.next();
      return atom(name);
    }
    if (lex.tok == Tok::LParen) {
      lex.next();
      TermPtr t = sum();
      if (lex.tok != Tok::RParen) fail("expected ')'");
      lex.next();
      return t;
    }
    fail("expected identifier or '('");
  }
};

}  // namespace

TermPtr parse_term(const std::string& text, System system,
                   const SemanticsConfig* config) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ParseError("empty term", 0);
  Parser p(text, system, config);
  return p.parse();
}

}  // namespace pa
